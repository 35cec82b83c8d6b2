"""Project configuration: strict JSON schema with unit-suffixed keys."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from .errors import ConfigError, FrictionSwitchError
from .geometry import GrooveLayout, PinConfiguration, reference_configurations
from .model import SwitchModelParams
from .rig import NoiseModel, RigConfig

__all__ = ["ProjectConfig", "parse_config", "config_to_dict"]

# json key -> dataclass attribute
_RIG_KEYS = {
    "pulley_radius_mm": "pulley_radius",
    "actuator_stroke_mm": "actuator_stroke",
    "sample_rate_hz": "sample_rate",
    "hook_mass_kg": "hook_mass",
    "gravity_m_s2": "gravity",
    "on_duration_ms": "on_duration",
    "off_duration_ms": "off_duration",
}
_LAYOUT_KEYS = {
    "groove_count": "groove_count",
    "groove_pitch_deg": "groove_pitch",
    "segment_angle_deg": "segment_angle",
    "groove_radius_mm": "groove_radius",
    "pin_diameter_mm": "pin_diameter",
    "pin_diameter_tolerance_mm": "pin_diameter_tolerance",
    "substrate_thickness_mm": "substrate_thickness",
    "tendon_contact_angle_deg": "tendon_contact_angle",
}
_NOISE_KEYS = {"force_sigma_N": "force_sigma", "settle_time_ms": "settle_time"}
_MODEL_KEYS = ("mu_low", "mu_high", "w", "f_thr_N", "f_r_N", "alpha_deg")
_TOP_KEYS = ("rig", "layout", "pins", "model", "noise", "seed")


def _default_pins():
    return reference_configurations()["six-single"]


@dataclass(frozen=True)
class ProjectConfig:
    rig: RigConfig = field(default_factory=RigConfig)
    layout: GrooveLayout = field(default_factory=GrooveLayout)
    pins: PinConfiguration = field(default_factory=_default_pins)
    model: SwitchModelParams = field(default_factory=SwitchModelParams)
    noise: NoiseModel = field(default_factory=NoiseModel)
    seed: int = 0


def _number(value, where, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", field=where)
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"expected an integer, got {value!r}", field=where)
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {value!r}", field=where)
    return float(value)


def _section(data, name) -> Mapping[str, Any]:
    value = data.get(name, {})
    if not isinstance(value, Mapping):
        raise ConfigError("expected an object", field=name)
    return value


def _reject_unknown(section, allowed, prefix):
    for key in section:
        if key not in allowed:
            raise ConfigError("unknown key", field=f"{prefix}{key}")


def _build(cls, section, keys, prefix, integers=()):
    _reject_unknown(section, keys, prefix)
    kwargs = {attr: _number(section[key], prefix + key, key in integers) for key, attr in keys.items() if key in section}
    try:
        return cls(**kwargs)
    except ConfigError as exc:
        inverse = {attr: key for key, attr in keys.items()}
        raise ConfigError(exc.reason, field=prefix + inverse.get(exc.field, str(exc.field))) from None
    except FrictionSwitchError as exc:
        raise ConfigError(str(exc), field=prefix.rstrip(".")) from None


def parse_config(data: Mapping[str, Any]) -> ProjectConfig:
    """Validate a decoded JSON object. Missing sections take the reference defaults."""
    if not isinstance(data, Mapping):
        raise ConfigError("top level must be an object")
    _reject_unknown(data, _TOP_KEYS, "")

    rig = _build(RigConfig, _section(data, "rig"), _RIG_KEYS, "rig.")
    layout = _build(GrooveLayout, _section(data, "layout"), _LAYOUT_KEYS, "layout.", integers={"groove_count"})
    noise = _build(NoiseModel, _section(data, "noise"), _NOISE_KEYS, "noise.")
    if noise.settle_time >= rig.off_duration:
        raise ConfigError("must be shorter than rig.off_duration_ms", field="noise.settle_time_ms")

    pins_data = _section(data, "pins")
    _reject_unknown(pins_data, ("occupied_grooves", "label"), "pins.")
    if "occupied_grooves" in pins_data:
        grooves = pins_data["occupied_grooves"]
        if not isinstance(grooves, list):
            raise ConfigError("expected a list of groove indices", field="pins.occupied_grooves")
        if not grooves:
            raise ConfigError("at least one pin is required", field="pins.occupied_grooves")
        indices = [_number(g, "pins.occupied_grooves", integer=True) for g in grooves]
        label = pins_data.get("label", "")
        if not isinstance(label, str):
            raise ConfigError("expected a string", field="pins.label")
        try:
            pins = PinConfiguration(tuple(indices), label).check(layout)
        except FrictionSwitchError as exc:
            raise ConfigError(str(exc), field="pins.occupied_grooves") from None
    else:
        pins = _default_pins()

    model_data = _section(data, "model")
    _reject_unknown(model_data, _MODEL_KEYS, "model.")
    defaults = SwitchModelParams()
    kwargs = {}
    for key, attr in (("mu_low", "mu_low"), ("mu_high", "mu_high"), ("w", "weight"), ("f_thr_N", "threshold_force")):
        if key in model_data:
            kwargs[attr] = _number(model_data[key], "model." + key)
    if "alpha_deg" in model_data:
        kwargs["wrap_angle"] = math.radians(_number(model_data["alpha_deg"], "model.alpha_deg"))
    if "f_r_N" in model_data:
        fr = model_data["f_r_N"]
        if not isinstance(fr, list) or len(fr) != 2:
            raise ConfigError("expected [lo, hi]", field="model.f_r_N")
        kwargs["transition_range"] = tuple(_number(v, "model.f_r_N") for v in fr)
    try:
        model = SwitchModelParams(**{**defaults.__dict__, **kwargs})
    except FrictionSwitchError as exc:
        raise ConfigError(str(exc), field="model") from None

    seed = _number(data.get("seed", 0), "seed", integer=True)
    if seed < 0:
        raise ConfigError("must be >= 0", field="seed")
    return ProjectConfig(rig, layout, pins, model, noise, seed)


def config_to_dict(cfg: ProjectConfig) -> dict:
    return {
        "rig": {key: getattr(cfg.rig, attr) for key, attr in _RIG_KEYS.items()},
        "layout": {key: getattr(cfg.layout, attr) for key, attr in _LAYOUT_KEYS.items()},
        "pins": {"occupied_grooves": list(cfg.pins.occupied_grooves), "label": cfg.pins.label},
        "model": {
            "mu_low": cfg.model.mu_low,
            "mu_high": cfg.model.mu_high,
            "w": cfg.model.weight,
            "f_thr_N": cfg.model.threshold_force,
            "f_r_N": list(cfg.model.transition_range),
            "alpha_deg": math.degrees(cfg.model.wrap_angle),
        },
        "noise": {key: getattr(cfg.noise, attr) for key, attr in _NOISE_KEYS.items()},
        "seed": cfg.seed,
    }

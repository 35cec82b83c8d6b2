"""``friction-switch`` command line.

Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 data error, 5 fit error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import formats
from .config import ProjectConfig, parse_config
from .errors import (
    ConfigError,
    DomainError,
    FrictionSwitchError,
    InsufficientDataError,
    TraceFormatError,
    UnderdeterminedError,
)
from .fitting import PARAMETER_NAMES, FitProblem, fit_switch_model, params_from_dict
from .geometry import GrooveLayout, estimate_weight, reference_configurations, spanned_angle
from .model import (
    CONCENTRIC,
    ECCENTRIC,
    CapstanContact,
    capstan_friction_magnitude,
    eccentric_advantage,
    switch_friction,
    switch_friction_curve,
)
from .pipeline import DEFAULT_MIN_DWELL, DEFAULT_SLOPE_TOLERANCE, build_friction_curve
from .rig import LoadCase, RigConfig, load_force, simulate_experiment, calibrated_loads

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_DATA = 4
EXIT_FIT = 5

MANIFEST = "manifest.json"
_SHORT_DIRECTION = {ECCENTRIC: "ecc", CONCENTRIC: "conc"}


class _Failure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def load_config(path) -> ProjectConfig:
    if path is None:
        return ProjectConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON ({exc})", field=str(path)) from None
    return parse_config(data)


def friction_model_for(kind: str, cfg: ProjectConfig):
    """Callable load -> friction magnitude used to synthesize traces."""
    params = cfg.model
    low, high = params.low_contact(), params.high_contact()
    if kind == "none":
        return lambda load: 0.0
    if kind == "low":
        return lambda load: capstan_friction_magnitude(load, low)
    if kind == "high":
        return lambda load: capstan_friction_magnitude(load, high)
    if kind == "switch":
        return lambda load: switch_friction(
            load, capstan_friction_magnitude(load, low), capstan_friction_magnitude(load, high), params
        )
    raise ConfigError(f"unknown friction model {kind!r}", field="--model")


def _parse_floats(text, what):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError("expected comma-separated numbers", field=what) from None
    if not values:
        raise ConfigError("expected at least one value", field=what)
    return values


# -- commands ----------------------------------------------------------------


def cmd_geometry(args) -> int:
    if args.config is None:
        layout = GrooveLayout()
        rig = RigConfig()
        configs = list(reference_configurations(layout).values())
    else:
        cfg = load_config(args.config)
        layout, rig, configs = cfg.layout, cfg.rig, [cfg.pins]
    for pins in configs:
        span = spanned_angle(pins, layout)
        w = estimate_weight(pins, layout, rig.pulley_radius)
        name = pins.label or f"{pins.pin_count} pins"
        print(f"{name}: grooves {list(pins.occupied_grooves)}  spanned angle {span:.2f} deg  estimated w {w:.4f}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    model = friction_model_for(args.model, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    traces = simulate_experiment(cfg.rig, calibrated_loads(), model, cfg.noise, seed)
    entries = []
    for i, trace in enumerate(traces):
        name = f"trace_{i // 2:02d}_{_SHORT_DIRECTION[trace.direction]}.csv"
        formats.write_trace_csv(out / name, trace)
        f_load = load_force(trace.load_case, cfg.rig)
        entries.append(
            {
                "file": name,
                "mass_kg": trace.load_case.mass,
                "speed_percent": trace.load_case.speed_percent,
                "direction": trace.direction,
                "seed": trace.seed,
                "load_N": f_load,
                "friction_N": float(model(f_load)),
            }
        )
    manifest = {
        "seed": seed,
        "friction_model": args.model,
        "rig": {k: v for k, v in cfg.rig.__dict__.items()},
        "traces": entries,
    }
    formats.write_json(out / MANIFEST, manifest)
    print(f"wrote {len(entries)} traces to {out}")
    return EXIT_OK


def _read_manifest(directory: Path):
    path = directory / MANIFEST
    if not path.is_file():
        raise InsufficientDataError(f"{directory}: no {MANIFEST} describing the traces")
    try:
        manifest = formats.read_json(path)
        rig = RigConfig(**manifest.get("rig", {}))
        entries = manifest["traces"]
        for e in entries:
            e["case"] = LoadCase(float(e["mass_kg"]), float(e["speed_percent"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise TraceFormatError(f"{path}: malformed manifest ({exc})") from None
    return rig, entries


def cmd_extract(args) -> int:
    directory = Path(args.traces)
    if not directory.is_dir():
        raise OSError(f"{directory} is not a directory")
    rig, entries = _read_manifest(directory)
    if args.config is not None:
        rig = load_config(args.config).rig
    traces = [
        formats.read_trace_csv(directory / e["file"], e["case"], int(e.get("seed", 0)), e.get("direction"))
        for e in entries
    ]
    curve = build_friction_curve(
        traces, rig, args.min_dwell, args.slope_tolerance, label=args.label or directory.name
    )
    formats.write_curve_csv(args.out, curve)
    print(f"wrote {len(curve)} samples to {args.out}")
    return EXIT_OK


def cmd_fit(args) -> int:
    free = tuple(p.strip() for p in args.free.split(",") if p.strip()) if args.free is not None else PARAMETER_NAMES
    try:
        device, low, high = (formats.read_curve_csv(p) for p in (args.device, args.low, args.high))
    except TraceFormatError as exc:
        raise _Failure(EXIT_DATA, str(exc)) from None
    initial = load_config(args.config).model
    try:
        problem = FitProblem(device, low, high, free_parameters=free, weighted=args.weighted)
        result = fit_switch_model(problem, initial, max_iterations=args.max_iterations, method=args.method)
    except (DomainError, UnderdeterminedError, InsufficientDataError) as exc:
        raise _Failure(EXIT_FIT, str(exc)) from None
    formats.write_json(args.out, result.to_dict())
    p = result.params
    print(
        f"f_thr={p.threshold_force:.6g} N  width={p.width:.6g} N  w={p.weight:.6g}  "
        f"rmse={result.rmse:.4g} N  converged={result.converged}"
    )
    return EXIT_OK


def _read_params(path):
    try:
        data = formats.read_json(path)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"{path}: invalid JSON ({exc})") from None
    try:
        return params_from_dict(data["params"] if "params" in data else data)
    except (KeyError, TypeError) as exc:
        raise TraceFormatError(f"{path}: missing parameter {exc}") from None


def cmd_predict(args) -> int:
    params = _read_params(args.params)
    low, high = formats.read_curve_csv(args.low), formats.read_curve_csv(args.high)
    loads = _parse_floats(args.loads, "--loads") if args.loads else low.loads
    curve = switch_friction_curve(np.asarray(loads, dtype=float), low, high, params, label=args.label)
    formats.write_curve_csv(args.out, curve)
    print(f"wrote {len(curve)} samples to {args.out}")
    return EXIT_OK


def cmd_sizing(args) -> int:
    if not args.mu >= 0:
        raise ConfigError("must be >= 0", field="--mu")
    if not 0 < args.alpha_deg <= 360:
        raise ConfigError("must lie in (0, 360]", field="--alpha-deg")
    adv = eccentric_advantage(CapstanContact(math.radians(args.alpha_deg), args.mu))
    print(f"eccentric advantage: {adv:.6f}")
    print(f"motor downsizing at equal eccentric output: {100 * adv:.2f}%")
    return EXIT_OK


def cmd_plot(args) -> int:
    from .svg import render_curves

    curves = [formats.read_curve_csv(p) for p in args.curves]
    formats.atomic_write_text(args.out, render_curves(curves, title=args.title))
    print(f"wrote {args.out}")
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="friction-switch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geometry", help="pin layout report")
    p.add_argument("--config")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("simulate", help="synthesize rig traces for every calibrated load")
    p.add_argument("--config")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--model", default="switch", choices=("switch", "low", "high", "none"))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("extract", help="friction curve from a trace directory")
    p.add_argument("traces")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--label")
    p.add_argument("--min-dwell", type=float, default=DEFAULT_MIN_DWELL, help="ms")
    p.add_argument("--slope-tolerance", type=float, default=DEFAULT_SLOPE_TOLERANCE, help="N/s")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("fit", help="fit switch parameters to a device curve")
    p.add_argument("device")
    p.add_argument("low")
    p.add_argument("high")
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="initial and fixed model parameters")
    p.add_argument("--free", help="comma-separated subset of f_thr,width,w (empty for none)")
    p.add_argument("--method", default="nelder-mead", choices=("nelder-mead", "trf"))
    p.add_argument("--max-iterations", type=int, default=5000)
    p.add_argument("--weighted", action="store_true", help="weight residuals by 1/sigma")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="evaluate the switch model on characteristic curves")
    p.add_argument("params", help="fit result or parameter JSON")
    p.add_argument("low")
    p.add_argument("high")
    p.add_argument("--out", required=True)
    p.add_argument("--loads", help="comma-separated loads in N (default: low-curve loads)")
    p.add_argument("--label", default="model")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sizing", help="eccentric advantage and motor downsizing")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--alpha-deg", type=float, required=True)
    p.set_defaults(func=cmd_sizing)

    p = sub.add_parser("plot", help="SVG chart of curve CSVs")
    p.add_argument("curves", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Failure as exc:
        code, msg = exc.code, str(exc)
    except ConfigError as exc:
        code, msg = EXIT_CONFIG, f"config error: {exc}"
    except OSError as exc:
        code, msg = EXIT_IO, f"I/O error: {exc}"
    except (FrictionSwitchError, ValueError) as exc:
        code, msg = EXIT_DATA, f"data error: {exc}"
    print(f"friction-switch {args.command}: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

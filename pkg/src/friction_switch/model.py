"""Capstan friction and the dual-material sigmoid friction-switch model.

All angles are radians. Forces are newtons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DomainError, ExtrapolationError, InsufficientDataError

__all__ = [
    "ECCENTRIC",
    "CONCENTRIC",
    "CapstanContact",
    "SwitchModelParams",
    "FrictionSample",
    "FrictionCurve",
    "capstan_holding_force",
    "capstan_friction_magnitude",
    "friction_from_forces",
    "sigmoid_weight",
    "transition_scale",
    "switch_friction",
    "switch_friction_curve",
    "eccentric_advantage",
    "REFERENCE_WRAP_ANGLE",
    "REFERENCE_MU_PINS",
    "REFERENCE_MU_SILICONE",
]

ECCENTRIC = "eccentric"
CONCENTRIC = "concentric"
_DIRECTIONS = (ECCENTRIC, CONCENTRIC)

# shared by every configuration in the reported fits
REFERENCE_WRAP_ANGLE = math.radians(63.89)
REFERENCE_MU_PINS = 0.05
REFERENCE_MU_SILICONE = 0.24

_LN19 = math.log(19.0)


@dataclass(frozen=True)
class CapstanContact:
    """A single frictional wrap: angle ``wrap_angle`` [rad], coefficient ``friction_coefficient``."""

    wrap_angle: float
    friction_coefficient: float

    def __post_init__(self):
        if not (0.0 <= self.wrap_angle <= 2.0 * math.pi):
            raise DomainError(f"wrap_angle must lie in [0, 2*pi], got {self.wrap_angle!r}")
        if not self.friction_coefficient >= 0.0:
            raise DomainError(f"friction_coefficient must be >= 0, got {self.friction_coefficient!r}")

    @classmethod
    def from_degrees(cls, wrap_angle_deg: float, friction_coefficient: float) -> "CapstanContact":
        return cls(math.radians(wrap_angle_deg), friction_coefficient)

    @property
    def exponent(self) -> float:
        return self.friction_coefficient * self.wrap_angle


@dataclass(frozen=True)
class SwitchModelParams:
    """Parameters of the weighted sigmoid blend between pin and substrate friction.

    ``transition_range`` is the load interval (lo, hi) over which the blend
    goes from 5 % to 95 % high-friction; only its width enters the model.
    """

    mu_low: float = REFERENCE_MU_PINS
    mu_high: float = REFERENCE_MU_SILICONE
    weight: float = 0.1
    threshold_force: float = 4.3
    transition_range: tuple[float, float] = (0.0, 5.5)
    wrap_angle: float = REFERENCE_WRAP_ANGLE

    def __post_init__(self):
        lo, hi = (float(v) for v in self.transition_range)
        object.__setattr__(self, "transition_range", (lo, hi))
        if not (0.0 <= self.mu_low <= self.mu_high):
            raise DomainError(f"need 0 <= mu_low <= mu_high, got {self.mu_low!r}, {self.mu_high!r}")
        if not (0.0 <= self.weight <= 0.5):
            raise DomainError(f"weight must lie in [0, 0.5], got {self.weight!r}")
        if not lo < hi:
            raise DomainError(f"transition_range must satisfy lo < hi, got {self.transition_range!r}")
        if not (0.0 <= self.wrap_angle <= 2.0 * math.pi):
            raise DomainError(f"wrap_angle must lie in [0, 2*pi], got {self.wrap_angle!r}")
        if not math.isfinite(self.threshold_force):
            raise DomainError("threshold_force must be finite")

    @property
    def width(self) -> float:
        lo, hi = self.transition_range
        return hi - lo

    @property
    def scale(self) -> float:
        return transition_scale(self.transition_range)

    def low_contact(self) -> CapstanContact:
        return CapstanContact(self.wrap_angle, self.mu_low)

    def high_contact(self) -> CapstanContact:
        return CapstanContact(self.wrap_angle, self.mu_high)

    def with_width(self, width: float) -> "SwitchModelParams":
        """Copy with a transition range of ``width`` centred on the threshold."""
        half = 0.5 * width
        return replace(self, transition_range=(self.threshold_force - half, self.threshold_force + half))


@dataclass(frozen=True)
class FrictionSample:
    load_force: float
    friction_magnitude: float
    sigma: float = 0.0

    def __post_init__(self):
        if not self.load_force > 0.0:
            raise DomainError(f"load_force must be > 0, got {self.load_force!r}")
        if not self.friction_magnitude >= 0.0:
            raise DomainError(f"friction_magnitude must be >= 0, got {self.friction_magnitude!r}")
        if not self.sigma >= 0.0:
            raise DomainError(f"sigma must be >= 0, got {self.sigma!r}")


@dataclass(frozen=True)
class FrictionCurve:
    """Friction-vs-load samples, strictly increasing in load."""

    samples: tuple[FrictionSample, ...]
    label: str = ""
    _arrays: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        samples = tuple(self.samples)
        object.__setattr__(self, "samples", samples)
        loads = np.array([s.load_force for s in samples], dtype=float)
        if loads.size > 1 and not np.all(np.diff(loads) > 0):
            raise DomainError(f"curve {self.label!r}: loads must be strictly increasing")
        friction = np.array([s.friction_magnitude for s in samples], dtype=float)
        sigma = np.array([s.sigma for s in samples], dtype=float)
        for arr in (loads, friction, sigma):
            arr.setflags(write=False)
        object.__setattr__(self, "_arrays", (loads, friction, sigma))

    @classmethod
    def from_arrays(cls, loads, friction, sigma=None, label: str = "") -> "FrictionCurve":
        loads = np.asarray(loads, dtype=float)
        friction = np.asarray(friction, dtype=float)
        sigma = np.zeros_like(loads) if sigma is None else np.asarray(sigma, dtype=float)
        if not (loads.shape == friction.shape == sigma.shape) or loads.ndim != 1:
            raise DomainError("loads, friction and sigma must be 1-D arrays of equal length")
        samples = (FrictionSample(float(l), float(f), float(s)) for l, f, s in zip(loads, friction, sigma))
        return cls(tuple(samples), label)

    def __len__(self):
        return len(self.samples)

    @property
    def loads(self) -> np.ndarray:
        return self._arrays[0]

    @property
    def friction(self) -> np.ndarray:
        return self._arrays[1]

    @property
    def sigma(self) -> np.ndarray:
        return self._arrays[2]

    @property
    def domain(self) -> tuple[float, float]:
        if not self.samples:
            raise InsufficientDataError(f"curve {self.label!r} is empty")
        return float(self.loads[0]), float(self.loads[-1])

    def interpolate(self, loads) -> np.ndarray:
        """Piecewise-linear friction at ``loads``; refuses to extrapolate."""
        if len(self.samples) < 2:
            raise InsufficientDataError(f"curve {self.label!r} needs >= 2 samples to interpolate")
        x = np.asarray(loads, dtype=float)
        lo, hi = self.domain
        if np.any(x < lo) or np.any(x > hi):
            bad = x[(x < lo) | (x > hi)]
            raise ExtrapolationError(
                f"load {float(bad.flat[0])!r} outside curve {self.label!r} domain [{lo!r}, {hi!r}]"
            )
        return np.interp(x, self.loads, self.friction)


def _check_direction(direction):
    if direction not in _DIRECTIONS:
        raise DomainError(f"direction must be one of {_DIRECTIONS}, got {direction!r}")


def capstan_holding_force(load: float, contact: CapstanContact, direction: str) -> float:
    """Tendon force holding ``load`` across the wrap.

    Eccentric (load about to win) gets ``load * exp(-mu*alpha)``; concentric
    gets ``load * exp(+mu*alpha)``.
    """
    if not load >= 0.0:
        raise DomainError(f"load must be >= 0, got {load!r}")
    _check_direction(direction)
    sign = -1.0 if direction == ECCENTRIC else 1.0
    return load * math.exp(sign * contact.exponent)


def capstan_friction_magnitude(load: float, contact: CapstanContact) -> float:
    """Half the concentric/eccentric holding-force gap, ``load * sinh(mu*alpha)``."""
    if not load >= 0.0:
        raise DomainError(f"load must be >= 0, got {load!r}")
    return load * math.sinh(contact.exponent)


def friction_from_forces(f_eccentric: float, f_concentric: float) -> float:
    if not (f_eccentric >= 0.0 and f_concentric >= 0.0):
        raise DomainError(f"forces must be >= 0, got {f_eccentric!r}, {f_concentric!r}")
    return abs(f_eccentric - f_concentric) / 2.0


def sigmoid_weight(load: float, threshold_force: float, scale: float) -> float:
    """Logistic high-friction fraction at ``load``; 0.5 at the threshold."""
    if not scale > 0.0:
        raise DomainError(f"scale must be > 0, got {scale!r}")
    z = (load - threshold_force) / scale
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def transition_scale(transition_range: Sequence[float]) -> float:
    """Sigmoid scale whose 5 %..95 % rise spans ``transition_range`` exactly."""
    lo, hi = transition_range
    if not lo < hi:
        raise DomainError(f"transition range must satisfy lo < hi, got {tuple(transition_range)!r}")
    return (hi - lo) / (2.0 * _LN19)


def switch_friction(load: float, friction_low: float, friction_high: float, params: SwitchModelParams) -> float:
    """Blend the low- and high-material frictions at ``load``.

    ``friction_low`` and ``friction_high`` are the branch frictions at this
    load, e.g. from measured characteristic curves or from
    :func:`capstan_friction_magnitude` with ``params.mu_low``/``mu_high``.
    """
    if not load >= 0.0:
        raise DomainError(f"load must be >= 0, got {load!r}")
    if not (friction_low >= 0.0 and friction_high >= 0.0):
        raise DomainError("branch frictions must be >= 0")
    s = sigmoid_weight(load, params.threshold_force, params.scale)
    lo = (1.0 + params.weight) * friction_low
    return lo + s * ((1.0 - params.weight) * friction_high - lo)


def switch_friction_curve(
    loads, low_curve: FrictionCurve, high_curve: FrictionCurve, params: SwitchModelParams, label: str = "model"
) -> FrictionCurve:
    """Evaluate the switch model at each load, branches interpolated from the two curves."""
    x = np.asarray(loads, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise DomainError("loads must be a non-empty 1-D sequence")
    if np.any(x < 0):
        raise DomainError("loads must be >= 0")
    f_low = low_curve.interpolate(x)
    f_high = high_curve.interpolate(x)
    y = kernels.switch_blend(x, f_low, f_high, params.weight, params.threshold_force, params.scale)
    return FrictionCurve.from_arrays(x, y, label=label)


def eccentric_advantage(contact: CapstanContact) -> float:
    """Fraction of the holding force carried by friction when post-eccentric.

    Under a linear mass-torque assumption this is also the fraction by which
    the actuator can be downsized at equal eccentric output.
    """
    return -math.expm1(-contact.exponent)

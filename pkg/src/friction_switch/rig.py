"""Synthetic replica of the two-pulley friction test rig.

A trial is ``repetitions`` duty cycles: the actuator runs for
``on_duration`` then rests for ``off_duration``. The first ``settle_time``
of every rest is labelled *settling*; the remainder is the static dwell whose
force equals ``F_l - F_fr`` (eccentric) or ``F_l + F_fr`` (concentric).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DomainError
from .model import CONCENTRIC, ECCENTRIC

__all__ = [
    "RigConfig",
    "LoadCase",
    "NoiseModel",
    "ForceTrace",
    "PHASE_UNKNOWN",
    "PHASE_MOVING",
    "PHASE_SETTLING",
    "PHASE_ECCENTRIC_DWELL",
    "PHASE_CONCENTRIC_DWELL",
    "PHASE_NAMES",
    "calibrated_loads",
    "load_force",
    "simulate_trial",
    "simulate_experiment",
    "ECCENTRIC_REPETITIONS",
    "CONCENTRIC_REPETITIONS",
]

PHASE_UNKNOWN = 0
PHASE_MOVING = 1
PHASE_SETTLING = 2
PHASE_ECCENTRIC_DWELL = 3
PHASE_CONCENTRIC_DWELL = 4
PHASE_NAMES = {
    PHASE_UNKNOWN: "unknown",
    PHASE_MOVING: "moving",
    PHASE_SETTLING: "settling",
    PHASE_ECCENTRIC_DWELL: "eccentric_dwell",
    PHASE_CONCENTRIC_DWELL: "concentric_dwell",
}
DWELL_PHASE = {ECCENTRIC: PHASE_ECCENTRIC_DWELL, CONCENTRIC: PHASE_CONCENTRIC_DWELL}

# average repetitions per load when releasing / lifting
ECCENTRIC_REPETITIONS = 13
CONCENTRIC_REPETITIONS = 30

NOMINAL_ACTUATOR_SPEED = 50.0  # mm/s at 100 %

_CALIBRATED_LOADS = (
    (0.2512, 47),
    (0.5036, 48),
    (1.0032, 49),
    (1.5039, 50),
    (2.0050, 51),
    (2.5054, 52),
    (3.0072, 53),
    (3.5086, 54),
    (4.0078, 55),
    (4.5045, 56),
    (5.0025, 57),
)


@dataclass(frozen=True)
class RigConfig:
    pulley_radius: float = 22.0  # mm
    actuator_stroke: float = 152.4  # mm
    sample_rate: float = 200.0  # Hz
    hook_mass: float = 0.06253  # kg
    gravity: float = 9.80665  # m/s^2
    on_duration: float = 500.0  # ms
    off_duration: float = 3000.0  # ms

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ConfigError(f"must be > 0, got {value!r}", field=name)

    def samples(self, milliseconds: float) -> int:
        return int(round(milliseconds * self.sample_rate / 1000.0))


@dataclass(frozen=True)
class LoadCase:
    mass: float  # kg
    speed_percent: float

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be > 0, got {self.mass!r}")
        if not 0 < self.speed_percent <= 100:
            raise DomainError(f"speed_percent must lie in (0, 100], got {self.speed_percent!r}")


@dataclass(frozen=True)
class NoiseModel:
    force_sigma: float = 0.05  # N
    settle_time: float = 500.0  # ms

    def __post_init__(self):
        if not self.force_sigma >= 0:
            raise ConfigError(f"must be >= 0, got {self.force_sigma!r}", field="force_sigma")
        if not self.settle_time >= 0:
            raise ConfigError(f"must be >= 0, got {self.settle_time!r}", field="settle_time")


@dataclass(frozen=True, eq=False)
class ForceTrace:
    """Uniformly sampled force/position record of one trial.

    ``phases`` holds integer phase codes (see :data:`PHASE_NAMES`).
    """

    timestamps: np.ndarray
    forces: np.ndarray
    positions: np.ndarray
    phases: np.ndarray
    load_case: LoadCase
    seed: int = 0
    direction: str | None = None

    def __post_init__(self):
        n = len(self.timestamps)
        if not (len(self.forces) == len(self.positions) == len(self.phases) == n):
            raise DomainError("trace arrays must have equal length")
        if self.direction not in (None, ECCENTRIC, CONCENTRIC):
            raise DomainError(f"unknown direction {self.direction!r}")

    def __len__(self):
        return len(self.timestamps)

    @property
    def has_phase_labels(self) -> bool:
        return bool(np.any(self.phases != PHASE_UNKNOWN))


def calibrated_loads() -> list[LoadCase]:
    """The eleven calibrated masses [kg] with their actuator speeds [%]."""
    return [LoadCase(m, s) for m, s in _CALIBRATED_LOADS]


def load_force(case: LoadCase, rig: RigConfig) -> float:
    """Tendon load in newtons: (mass + hook) * g."""
    return (case.mass + rig.hook_mass) * rig.gravity


def _default_swing(f_load):
    return 0.1 * f_load + 0.5


def simulate_trial(
    rig: RigConfig,
    case: LoadCase,
    friction_model: Callable[[float], float],
    noise: NoiseModel,
    direction: str,
    repetitions: int,
    seed: int,
    swing: float | None = None,
) -> ForceTrace:
    """Generate one eccentric or concentric trial.

    During *moving* the force ramps linearly away from the dwell plateau by
    ``swing`` newtons (down when releasing, up when lifting), then ramps back
    during *settling*. ``swing`` defaults to ``0.1 * F_l + 0.5``.
    """
    if direction not in (ECCENTRIC, CONCENTRIC):
        raise DomainError(f"direction must be eccentric or concentric, got {direction!r}")
    if repetitions < 1:
        raise DomainError("repetitions must be >= 1")
    if noise.settle_time >= rig.off_duration:
        raise ConfigError(
            f"settle_time {noise.settle_time} ms must be shorter than off_duration {rig.off_duration} ms",
            field="settle_time",
        )

    f_load = load_force(case, rig)
    f_fr = float(friction_model(f_load))
    sign = -1.0 if direction == ECCENTRIC else 1.0
    plateau = f_load + sign * f_fr
    excursion = sign * (_default_swing(f_load) if swing is None else swing)

    n_on = rig.samples(rig.on_duration)
    n_off = rig.samples(rig.off_duration)
    n_settle = rig.samples(noise.settle_time)
    n_cycle = n_on + n_off
    n = repetitions * n_cycle

    k = np.arange(n_cycle)
    cycle_force = np.full(n_cycle, plateau)
    cycle_force[:n_on] = plateau + excursion * (k[:n_on] / n_on)
    if n_settle:
        cycle_force[n_on:n_on + n_settle] = plateau + excursion * (1.0 - (k[:n_settle] / n_settle))
    cycle_phase = np.full(n_cycle, DWELL_PHASE[direction], dtype=np.int8)
    cycle_phase[:n_on] = PHASE_MOVING
    cycle_phase[n_on:n_on + n_settle] = PHASE_SETTLING

    # actuator advance per cycle; extends when releasing, retracts when lifting
    step = case.speed_percent / 100.0 * NOMINAL_ACTUATOR_SPEED * rig.on_duration / 1000.0
    within = np.minimum(k, n_on) / n_on
    travel = (np.arange(repetitions)[:, None] + within[None, :]).ravel() * step
    travel = np.minimum(travel, rig.actuator_stroke)
    positions = travel if direction == ECCENTRIC else rig.actuator_stroke - travel

    forces = np.tile(cycle_force, repetitions)
    if noise.force_sigma > 0:
        rng = np.random.default_rng(seed)
        forces = forces + rng.normal(0.0, noise.force_sigma, n)

    return ForceTrace(
        timestamps=np.arange(n) / rig.sample_rate,
        forces=forces,
        positions=positions,
        phases=np.tile(cycle_phase, repetitions),
        load_case=case,
        seed=int(seed),
        direction=direction,
    )


def simulate_experiment(
    rig: RigConfig,
    loads: Sequence[LoadCase],
    friction_model: Callable[[float], float],
    noise: NoiseModel,
    seed: int,
    eccentric_repetitions: int = ECCENTRIC_REPETITIONS,
    concentric_repetitions: int = CONCENTRIC_REPETITIONS,
) -> list[ForceTrace]:
    """One eccentric and one concentric trial per load, in load order.

    Per-trial seeds are drawn from ``numpy.random.SeedSequence(seed)``.
    """
    loads = list(loads)
    if not loads:
        raise DomainError("need at least one load case")
    seeds = np.random.SeedSequence(seed).generate_state(2 * len(loads), dtype=np.uint32)
    traces = []
    for i, case in enumerate(loads):
        traces.append(
            simulate_trial(rig, case, friction_model, noise, ECCENTRIC, eccentric_repetitions, int(seeds[2 * i]))
        )
        traces.append(
            simulate_trial(
                rig, case, friction_model, noise, CONCENTRIC, concentric_repetitions, int(seeds[2 * i + 1])
            )
        )
    return traces


def expected_length(rig: RigConfig, repetitions: int) -> int:
    return int(math.floor(repetitions * (rig.on_duration + rig.off_duration) * rig.sample_rate / 1000.0 + 0.5))

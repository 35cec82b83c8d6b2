"""Plateau segmentation of force traces and friction-curve extraction."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import InsufficientDataError, TraceFormatError
from .model import CONCENTRIC, ECCENTRIC, FrictionCurve, FrictionSample
from .rig import PHASE_CONCENTRIC_DWELL, PHASE_ECCENTRIC_DWELL, ForceTrace, LoadCase, RigConfig, load_force

__all__ = [
    "PlateauSegment",
    "PhaseStats",
    "segment_plateaus",
    "phase_stats",
    "extract_friction",
    "build_friction_curve",
    "DEFAULT_MIN_DWELL",
    "DEFAULT_SLOPE_TOLERANCE",
    "DEFAULT_WINDOW",
]

DEFAULT_MIN_DWELL = 1000.0  # ms
DEFAULT_SLOPE_TOLERANCE = 0.2  # N/s
DEFAULT_WINDOW = 500.0  # ms, local regression span

_UNIFORM_RTOL = 1e-6


@dataclass(frozen=True)
class PlateauSegment:
    """Samples ``[start_index, end_index)`` of a trace judged static."""

    start_index: int
    end_index: int
    direction: str
    mean_force: float
    std_force: float

    @property
    def size(self) -> int:
        return self.end_index - self.start_index


@dataclass(frozen=True)
class PhaseStats:
    direction: str
    mean: float
    std: float
    segment_count: int


def _sample_interval(timestamps: np.ndarray) -> float:
    if timestamps.size < 2:
        raise TraceFormatError("trace needs at least two samples")
    steps = np.diff(timestamps)
    dt = float(np.median(steps))
    if not dt > 0 or np.any(np.abs(steps - dt) > _UNIFORM_RTOL * dt):
        raise TraceFormatError("timestamps must be strictly increasing and uniformly spaced")
    return dt


def _segment_direction(trace: ForceTrace, a: int, b: int, mean: float, median: float) -> str:
    if trace.has_phase_labels:
        votes = Counter(trace.phases[a:b].tolist())
        ecc, conc = votes.get(PHASE_ECCENTRIC_DWELL, 0), votes.get(PHASE_CONCENTRIC_DWELL, 0)
        if ecc or conc:
            return ECCENTRIC if ecc >= conc else CONCENTRIC
    if trace.direction is not None:
        return trace.direction
    return CONCENTRIC if mean > median else ECCENTRIC


def segment_plateaus(
    trace: ForceTrace,
    min_dwell: float = DEFAULT_MIN_DWELL,
    slope_tolerance: float = DEFAULT_SLOPE_TOLERANCE,
    window: float = DEFAULT_WINDOW,
) -> list[PlateauSegment]:
    """Find static dwells as long runs of near-zero local slope.

    Parameters
    ----------
    trace : ForceTrace
        Uniformly sampled trace.
    min_dwell : float
        Minimum plateau length in ms, counted after trimming.
    slope_tolerance : float
        Largest admissible |dF/dt| in N/s of the centred least-squares line.
    window : float
        Span of the local regression in ms. Each detected run is trimmed by
        half a window at both ends so ramp samples never leak into a plateau.

    Returns
    -------
    list of PlateauSegment
        Possibly empty. Direction comes from dwell phase labels if the trace
        has any, then from ``trace.direction``, then from the segment mean
        relative to the trace median.
    """
    if min_dwell <= 0:
        raise ValueError("min_dwell must be > 0")
    t = np.asarray(trace.timestamps, dtype=float)
    dt = _sample_interval(t)
    y = np.ascontiguousarray(trace.forces, dtype=float)
    fs_ms = 1.0 / (dt * 1000.0)
    half = max(1, int(round(0.5 * window * fs_ms)))
    min_len = max(2, int(math.ceil(min_dwell * fs_ms - 1e-9)))

    slope = kernels.rolling_slope(y, dt, half)
    mask = np.abs(slope) <= slope_tolerance
    starts, ends = kernels.find_runs(mask, 1)

    median = float(np.median(y))
    segments = []
    for a, b in zip(starts.tolist(), ends.tolist()):
        # runs touching the trace boundary have no ramp to trim on that side
        a2 = a if a == 0 else a + half
        b2 = b if b == y.size else b - half
        if b2 - a2 < min_len:
            continue
        seg = y[a2:b2]
        mean = float(seg.mean())
        std = float(seg.std(ddof=1))
        segments.append(PlateauSegment(a2, b2, _segment_direction(trace, a2, b2, mean, median), mean, std))
    return segments


def phase_stats(segments: Iterable[PlateauSegment], direction: str) -> PhaseStats:
    """Mean of segment means, pooled within-segment standard deviation."""
    members = [s for s in segments if s.direction == direction]
    if not members:
        raise InsufficientDataError(f"no {direction} segments")
    mean = float(np.mean([s.mean_force for s in members]))
    dof = sum(s.size - 1 for s in members)
    if dof > 0:
        std = math.sqrt(sum((s.size - 1) * s.std_force**2 for s in members) / dof)
    else:
        std = 0.0
    return PhaseStats(direction, mean, std, len(members))


def extract_friction(ecc: PhaseStats, conc: PhaseStats, load: float) -> FrictionSample:
    return FrictionSample(
        load_force=load,
        friction_magnitude=abs((ecc.mean - conc.mean) / 2.0),
        sigma=(ecc.std + conc.std) / 2.0,
    )


def _describe(case: LoadCase, rig: RigConfig) -> str:
    return f"load {load_force(case, rig):.4f} N (mass {case.mass} kg)"


def build_friction_curve(
    traces: Iterable[ForceTrace],
    rig: RigConfig,
    min_dwell: float = DEFAULT_MIN_DWELL,
    slope_tolerance: float = DEFAULT_SLOPE_TOLERANCE,
    window: float = DEFAULT_WINDOW,
    label: str = "",
) -> FrictionCurve:
    """One friction sample per load case, sorted by tendon load."""
    grouped: dict[LoadCase, list[PlateauSegment]] = {}
    for trace in traces:
        segs = segment_plateaus(trace, min_dwell, slope_tolerance, window)
        grouped.setdefault(trace.load_case, []).extend(segs)
    if len(grouped) < 2:
        raise InsufficientDataError(f"need traces for >= 2 distinct loads, got {len(grouped)}")

    samples = []
    for case, segs in grouped.items():
        stats = {}
        for direction in (ECCENTRIC, CONCENTRIC):
            try:
                stats[direction] = phase_stats(segs, direction)
            except InsufficientDataError:
                raise InsufficientDataError(f"no {direction} plateaus for {_describe(case, rig)}") from None
        samples.append(extract_friction(stats[ECCENTRIC], stats[CONCENTRIC], load_force(case, rig)))
    samples.sort(key=lambda s: s.load_force)
    return FrictionCurve(tuple(samples), label)

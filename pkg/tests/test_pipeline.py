import numpy as np
import pytest

from friction_switch.errors import InsufficientDataError, TraceFormatError
from friction_switch.model import CONCENTRIC, ECCENTRIC, REFERENCE_WRAP_ANGLE, CapstanContact, capstan_friction_magnitude
from friction_switch.pipeline import (
    PhaseStats,
    PlateauSegment,
    build_friction_curve,
    extract_friction,
    phase_stats,
    segment_plateaus,
)
from friction_switch.rig import (
    PHASE_UNKNOWN,
    ForceTrace,
    LoadCase,
    NoiseModel,
    RigConfig,
    load_force,
    simulate_experiment,
    simulate_trial,
    calibrated_loads,
)

RIG = RigConfig()
CAPSTAN = CapstanContact(REFERENCE_WRAP_ANGLE, 0.24)


def capstan_model(load):
    return capstan_friction_magnitude(load, CAPSTAN)


def ten_newton_case():
    return LoadCase(10.0 / RIG.gravity - RIG.hook_mass, 50)


def strip_labels(trace, direction=None):
    return ForceTrace(
        trace.timestamps, trace.forces, trace.positions, np.zeros_like(trace.phases), trace.load_case, trace.seed, direction
    )


def test_zero_noise_trial_gives_one_segment_per_repetition():
    tr = simulate_trial(RIG, ten_newton_case(), capstan_model, NoiseModel(0.0), ECCENTRIC, 13, 0)
    segs = segment_plateaus(tr)
    assert len(segs) == 13
    assert all(s.direction == ECCENTRIC for s in segs)
    assert all(s.mean_force == pytest.approx(7.2917, abs=1e-4) for s in segs)
    assert all(s.std_force < 1e-12 for s in segs)


def test_constant_trace_is_one_segment():
    n = 2000
    tr = ForceTrace(np.arange(n) / 200.0, np.full(n, 4.2), np.zeros(n), np.zeros(n, np.int8), ten_newton_case())
    segs = segment_plateaus(tr)
    assert len(segs) == 1
    assert segs[0].start_index == 0 and segs[0].end_index == n


def test_noisy_trial_segments_and_means():
    sigma = 0.05
    tr = simulate_trial(RIG, ten_newton_case(), capstan_model, NoiseModel(sigma, 500), ECCENTRIC, 13, 3)
    segs = segment_plateaus(tr, min_dwell=1000, slope_tolerance=0.2)
    assert len(segs) == 13
    truth = 10.0 - capstan_model(10.0)
    for s in segs:
        assert abs(s.mean_force - truth) < 3 * sigma / np.sqrt(s.size)


def test_no_plateau_returns_empty():
    n = 1000
    t = np.arange(n) / 200.0
    tr = ForceTrace(t, 3.0 * t, np.zeros(n), np.zeros(n, np.int8), ten_newton_case())
    assert segment_plateaus(tr) == []


def test_non_uniform_timestamps_rejected():
    n = 400
    t = np.arange(n) / 200.0
    t[200:] += 0.01
    tr = ForceTrace(t, np.ones(n), np.zeros(n), np.zeros(n, np.int8), ten_newton_case())
    with pytest.raises(TraceFormatError):
        segment_plateaus(tr)


def test_direction_fallbacks():
    tr = simulate_trial(RIG, ten_newton_case(), capstan_model, NoiseModel(0.0), CONCENTRIC, 4, 0)
    assert {s.direction for s in segment_plateaus(strip_labels(tr, ECCENTRIC))} == {ECCENTRIC}
    # median split: join an eccentric and a concentric record without labels
    e = simulate_trial(RIG, ten_newton_case(), capstan_model, NoiseModel(0.0), ECCENTRIC, 4, 0)
    n = len(e) + len(tr)
    joined = ForceTrace(
        np.arange(n) / RIG.sample_rate,
        np.concatenate([e.forces, tr.forces]),
        np.zeros(n),
        np.full(n, PHASE_UNKNOWN, np.int8),
        e.load_case,
    )
    dirs = [s.direction for s in segment_plateaus(joined)]
    assert dirs.count(ECCENTRIC) == 4 and dirs.count(CONCENTRIC) == 4


def test_phase_stats():
    one = PlateauSegment(0, 100, ECCENTRIC, 7.29, 0.05)
    st = phase_stats([one], ECCENTRIC)
    assert (st.mean, st.std, st.segment_count) == (7.29, pytest.approx(0.05), 1)
    st = phase_stats([one, PlateauSegment(200, 300, ECCENTRIC, 7.29, 0.05)], ECCENTRIC)
    assert st.mean == 7.29 and st.segment_count == 2
    with pytest.raises(InsufficientDataError):
        phase_stats([one], CONCENTRIC)


def test_phase_stats_pooled_std_matches_samples():
    rng = np.random.default_rng(2)
    chunks = [rng.normal(m, s, n) for m, s, n in [(1.0, 0.1, 50), (1.2, 0.3, 80), (0.9, 0.2, 30)]]
    segs = [PlateauSegment(0, c.size, ECCENTRIC, c.mean(), c.std(ddof=1)) for c in chunks]
    pooled = np.sqrt(sum(((c - c.mean()) ** 2).sum() for c in chunks) / sum(c.size - 1 for c in chunks))
    assert phase_stats(segs, ECCENTRIC).std == pytest.approx(pooled, rel=1e-12)


def test_simulated_eccentric_stats():
    tr = simulate_trial(RIG, ten_newton_case(), capstan_model, NoiseModel(), ECCENTRIC, 13, 9)
    st = phase_stats(segment_plateaus(tr), ECCENTRIC)
    assert st.mean == pytest.approx(7.2917, abs=0.01)


def test_extract_friction():
    e = PhaseStats(ECCENTRIC, 7.65193, 0.04, 3)
    c = PhaseStats(CONCENTRIC, 13.0686, 0.06, 3)
    s = extract_friction(e, c, 10.0)
    assert s.friction_magnitude == pytest.approx(2.7083, abs=1e-4)
    assert s.sigma == pytest.approx(0.05)
    assert extract_friction(c, e, 10.0).friction_magnitude == s.friction_magnitude
    assert extract_friction(e, PhaseStats(CONCENTRIC, 7.65193, 0.0, 1), 10.0).friction_magnitude == 0.0


def test_curve_from_noisy_experiment_within_two_percent():
    traces = simulate_experiment(RIG, calibrated_loads(), capstan_model, NoiseModel(), seed=4)
    curve = build_friction_curve(traces, RIG)
    assert len(curve) == 11
    expected = curve.loads * np.sinh(0.24 * REFERENCE_WRAP_ANGLE)
    np.testing.assert_allclose(curve.friction, expected, rtol=0.02)
    assert np.all(np.diff(curve.loads) > 0)


def test_zero_friction_curve():
    traces = simulate_experiment(RIG, calibrated_loads(), lambda f: 0.0, NoiseModel(), seed=4)
    curve = build_friction_curve(traces, RIG)
    assert np.all(curve.friction < 0.01)


def test_two_loads_minimal_curve():
    traces = simulate_experiment(RIG, calibrated_loads()[:2], capstan_model, NoiseModel(0.0), seed=4)
    assert len(build_friction_curve(traces, RIG)) == 2


def test_missing_direction_names_the_load():
    traces = simulate_experiment(RIG, calibrated_loads()[:3], capstan_model, NoiseModel(0.0), seed=4)
    del traces[3]  # concentric trace of the second load
    with pytest.raises(InsufficientDataError, match=r"concentric.*5\.55"):
        build_friction_curve(traces, RIG)


def test_single_load_rejected():
    traces = simulate_experiment(RIG, calibrated_loads()[:1], capstan_model, NoiseModel(0.0), seed=4)
    with pytest.raises(InsufficientDataError):
        build_friction_curve(traces, RIG)


def test_error_shrinks_with_noise():
    truth = np.array([capstan_model(load_force(c, RIG)) for c in calibrated_loads()])
    errs = []
    for sigma in (0.05, 0.025, 0.0125):
        e = []
        for seed in range(4):
            traces = simulate_experiment(RIG, calibrated_loads(), capstan_model, NoiseModel(sigma, 500), seed=seed)
            e.append(np.sqrt(np.mean((build_friction_curve(traces, RIG).friction - truth) ** 2)))
        errs.append(np.mean(e))
    assert errs[0] > errs[1] > errs[2]
    # O(sigma): halving sigma roughly halves the error
    assert 1.4 < errs[0] / errs[1] < 2.8 and 1.4 < errs[1] / errs[2] < 2.8

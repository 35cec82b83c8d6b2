"""Exit criteria. Each test is one criterion; the session summary prints PASS/FAIL per test."""
import json
import math
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from friction_switch.cli import main
from friction_switch.fitting import FitProblem, fit_switch_model
from friction_switch.geometry import GrooveLayout, estimate_weight, reference_configurations, spanned_angle
from friction_switch.model import (
    CONCENTRIC,
    ECCENTRIC,
    FrictionCurve,
    REFERENCE_MU_PINS,
    REFERENCE_MU_SILICONE,
    CapstanContact,
    SwitchModelParams,
    capstan_friction_magnitude,
    capstan_holding_force,
    eccentric_advantage,
    friction_from_forces,
    sigmoid_weight,
    switch_friction,
    switch_friction_curve,
)
from friction_switch.pipeline import PhaseStats, build_friction_curve, extract_friction
from friction_switch.rig import LoadCase, NoiseModel, RigConfig, load_force, simulate_experiment, calibrated_loads

ALPHA = math.radians(63.89)

# reported measurements
SILICONE_MAX = 12.97
THREE_DOUBLE_MAX = 9.667


def test_criterion_1_geometry_anchors():
    layout = GrooveLayout()
    configs = reference_configurations(layout)
    t0 = time.perf_counter()
    spans = {k: spanned_angle(v, layout) for k, v in configs.items()}
    elapsed = time.perf_counter() - t0
    assert spans["six-single"] == pytest.approx(59.6, abs=1e-12)
    assert spans["three-double"] == pytest.approx(35.76, abs=1e-12)
    assert spans["three-single"] == pytest.approx(23.84, abs=1e-12)
    assert elapsed < 1e-3


def test_criterion_2_capstan_anchor():
    f_load = load_force(LoadCase(5.0025, 57), RigConfig())
    t0 = time.perf_counter()
    f = capstan_friction_magnitude(f_load, CapstanContact(ALPHA, REFERENCE_MU_SILICONE))
    elapsed = time.perf_counter() - t0
    assert round(f, 2) == 13.45
    assert abs(f - SILICONE_MAX) / SILICONE_MAX < 0.10
    assert elapsed < 1e-3


def test_criterion_3_weight_heuristic_anchor():
    layout = GrooveLayout()
    configs = reference_configurations(layout)
    six = estimate_weight(configs["six-single"], layout, RigConfig().pulley_radius)
    three_d = estimate_weight(configs["three-double"], layout, RigConfig().pulley_radius)
    three_s = estimate_weight(configs["three-single"], layout, RigConfig().pulley_radius)
    assert round(six, 2) == 0.23 and round(three_d, 2) == 0.11 and three_s == three_d
    assert abs(six - 0.2) <= 0.05
    assert abs(three_d - 0.1) <= 0.05


def test_criterion_4_sizing_anchor():
    silicone = eccentric_advantage(CapstanContact(ALPHA, REFERENCE_MU_SILICONE))
    pins = eccentric_advantage(CapstanContact(ALPHA, REFERENCE_MU_PINS))
    assert abs(100 * silicone - 23.48) <= 0.01
    assert abs(100 * pins - 5.42) <= 0.01


def test_criterion_5_relative_drop():
    w = 0.1
    saturated = (1 - w) * SILICONE_MAX
    assert round(saturated, 2) == 11.67
    # model at a saturating load with the reported branch maxima
    p = SwitchModelParams(weight=w, threshold_force=4.3, transition_range=(0.0, 5.5))
    assert switch_friction(4.3 + 40 * p.scale, 0.0, SILICONE_MAX, p) == pytest.approx(saturated, rel=1e-12)
    drop = (SILICONE_MAX - THREE_DOUBLE_MAX) / SILICONE_MAX
    assert 0.20 <= drop <= 0.30
    assert THREE_DOUBLE_MAX < saturated < SILICONE_MAX


def test_criterion_6_pipeline_round_trip():
    rig = RigConfig()
    contact = CapstanContact(ALPHA, REFERENCE_MU_SILICONE)
    model = lambda load: capstan_friction_magnitude(load, contact)
    t0 = time.perf_counter()
    traces = simulate_experiment(rig, calibrated_loads(), model, NoiseModel(force_sigma=0.0), seed=2024)
    curve = build_friction_curve(traces, rig)
    elapsed = time.perf_counter() - t0
    injected = np.array([model(load_force(c, rig)) for c in calibrated_loads()])
    assert len(curve) == 11
    assert np.max(np.abs(curve.friction - injected)) <= 1e-9
    assert elapsed < 5.0


def test_criterion_7_fit_round_trip():
    loads = np.linspace(0.5, 50.0, 100)
    low = FrictionCurve.from_arrays(loads, loads * np.sinh(REFERENCE_MU_PINS * ALPHA), label="pins")
    high = FrictionCurve.from_arrays(loads, loads * np.sinh(REFERENCE_MU_SILICONE * ALPHA), label="silicone")
    truth = SwitchModelParams(weight=0.1, threshold_force=4.3).with_width(5.5)
    device = switch_friction_curve(loads, low, high, truth)
    want = np.array([4.3, 5.5, 0.1])

    def errors(p):
        return np.abs(np.array([p.threshold_force, p.width, p.weight]) / want - 1)

    t0 = time.perf_counter()
    for a in (0.5, 1.5):
        for b in (0.5, 1.5):
            for c in (0.5, 1.5):
                init = SwitchModelParams(weight=0.1 * c, threshold_force=4.3 * a).with_width(5.5 * b)
                result = fit_switch_model(FitProblem(device, low, high), init)
                assert result.converged
                assert np.all(errors(result.params) < 1e-6), (a, b, c)

    errs = []
    init = SwitchModelParams(weight=0.15, threshold_force=6.45).with_width(2.75)
    for seed in range(50):
        rng = np.random.default_rng(seed)
        noisy = FrictionCurve.from_arrays(loads, device.friction * (1 + 0.01 * rng.standard_normal(loads.size)))
        errs.append(errors(fit_switch_model(FitProblem(noisy, low, high), init).params))
    elapsed = time.perf_counter() - t0
    median = np.median(errs, axis=0)
    assert np.all(median < 0.05), median
    assert elapsed < 30.0


N_CASES = 1000


def test_criterion_8_invariant_suites():
    counts = {}

    def tally(name):
        counts[name] = counts.get(name, 0) + 1

    cases = settings(max_examples=N_CASES, deadline=None, database=None)

    @cases
    @given(st.floats(1e-3, 100.0), st.floats(0.0, 1.0), st.floats(0.0, 2 * math.pi))
    def reciprocity(load, mu, alpha):
        tally("capstan reciprocity")
        c = CapstanContact(alpha, mu)
        prod = capstan_holding_force(load, c, ECCENTRIC) * capstan_holding_force(load, c, CONCENTRIC)
        assert math.isclose(prod, load * load, rel_tol=1e-12)

    @cases
    @given(st.floats(-50, 50), st.floats(-50, 50), st.floats(1e-3, 1e-3 + 1.0) | st.floats(0.1, 20.0), st.floats(1e-6, 5.0))
    def sigmoid(x, thr, scale, dx):
        tally("sigmoid symmetry and monotonicity")
        s = sigmoid_weight(x, thr, scale)
        assert 0.0 <= s <= 1.0
        assert math.isclose(sigmoid_weight(2 * thr - x, thr, scale), 1.0 - s, abs_tol=1e-12)
        s2 = sigmoid_weight(x + dx, thr, scale)
        assert s2 >= s
        # strict wherever the increment exceeds double resolution
        if s * (1 - s) * dx / scale > 1e-13:
            assert s2 > s

    @cases
    @given(st.floats(0, 60), st.floats(0, 20), st.floats(0, 20), st.floats(0, 0.5), st.floats(-10, 60), st.floats(0.1, 30))
    def bounded(load, f_low, f_high, w, thr, width):
        tally("switch boundedness and w=0 degeneracy")
        p = SwitchModelParams(weight=w, threshold_force=thr).with_width(width)
        y = switch_friction(load, f_low, f_high, p)
        a, b = (1 + w) * f_low, (1 - w) * f_high
        eps = 1e-12 * max(a, b, 1.0)
        assert min(a, b) - eps <= y <= max(a, b) + eps
        p0 = SwitchModelParams(weight=0.0, threshold_force=thr).with_width(width)
        assert switch_friction(load, f_low, f_low, p0) == f_low

    @cases
    @given(st.floats(0, 100), st.floats(0, 100), st.floats(0, 1), st.floats(0, 1), st.floats(0.1, 100))
    def extraction(me, mc, se, sc, load):
        tally("extraction symmetry")
        a = extract_friction(PhaseStats(ECCENTRIC, me, se, 1), PhaseStats(CONCENTRIC, mc, sc, 1), load)
        b = extract_friction(PhaseStats(ECCENTRIC, mc, sc, 1), PhaseStats(CONCENTRIC, me, se, 1), load)
        assert a.friction_magnitude == b.friction_magnitude == friction_from_forces(me, mc)
        assert a.sigma == b.sigma

    t0 = time.perf_counter()
    for prop in (reciprocity, sigmoid, bounded, extraction):
        prop()
    elapsed = time.perf_counter() - t0
    assert len(counts) == 4
    assert all(n >= N_CASES for n in counts.values()), counts
    assert elapsed < 10.0


def _pipeline_outputs(root):
    traces = root / "traces"
    assert main(["simulate", "--out", str(traces), "--seed", "77", "--model", "switch"]) == 0
    assert main(["simulate", "--out", str(root / "low"), "--seed", "78", "--model", "low"]) == 0
    assert main(["simulate", "--out", str(root / "high"), "--seed", "79", "--model", "high"]) == 0
    for name in ("traces", "low", "high"):
        assert main(["extract", str(root / name), "--out", str(root / f"{name}.csv"), "--label", name]) == 0
    assert main(["fit", str(root / "traces.csv"), str(root / "low.csv"), str(root / "high.csv"), "--out", str(root / "fit.json")]) == 0
    return sorted(p for p in root.rglob("*") if p.is_file())


def test_criterion_9_determinism(tmp_path):
    a = _pipeline_outputs(tmp_path / "a")
    b = _pipeline_outputs(tmp_path / "b")
    rel = lambda paths, base: [p.relative_to(base) for p in paths]
    assert rel(a, tmp_path / "a") == rel(b, tmp_path / "b")
    assert len(a) == 3 * 23 + 3 + 1
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes(), pa.name
    fit = json.loads((tmp_path / "a" / "fit.json").read_text())
    assert fit["converged"] is True

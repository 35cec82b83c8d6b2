import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from friction_switch import kernels
from friction_switch._jit import NUMBA_AVAILABLE


def brute_slope(y, dt, half):
    out = []
    for i in range(len(y)):
        a, b = max(0, i - half), min(len(y) - 1, i + half)
        if a == b:
            out.append(0.0)
            continue
        x = np.arange(a, b + 1) * dt
        out.append(np.polyfit(x, y[a:b + 1], 1)[0])
    return np.array(out)


@pytest.mark.parametrize("impl", [kernels.rolling_slope_loop, kernels.rolling_slope_numpy])
@pytest.mark.parametrize("n, half", [(1, 3), (5, 3), (7, 3), (50, 4), (200, 25)])
def test_rolling_slope_matches_polyfit(impl, n, half):
    rng = np.random.default_rng(n + half)
    y = np.cumsum(rng.normal(size=n))
    np.testing.assert_allclose(impl(y, 0.005, half), brute_slope(y, 0.005, half), rtol=1e-8, atol=1e-8)


def test_rolling_slope_exact_on_lines():
    y = 3.0 + 2.5 * np.arange(300) * 0.01
    np.testing.assert_allclose(kernels.rolling_slope(y, 0.01, 20), 2.5, rtol=1e-10)


@pytest.mark.parametrize("impl", [kernels.find_runs_loop, kernels.find_runs_numpy])
def test_find_runs(impl):
    mask = np.array([1, 1, 0, 1, 1, 1, 0, 0, 1], dtype=bool)
    s, e = impl(mask, 2)
    assert s.tolist() == [0, 3] and e.tolist() == [2, 6]
    s, e = impl(mask, 1)
    assert s.tolist() == [0, 3, 8] and e.tolist() == [2, 6, 9]
    s, e = impl(np.zeros(0, dtype=bool), 1)
    assert s.size == 0


@given(hnp.arrays(np.bool_, st.integers(0, 60)), st.integers(1, 5))
def test_find_runs_flavours_agree(mask, min_len):
    a = kernels.find_runs_loop(mask, min_len)
    b = kernels.find_runs_numpy(mask, min_len)
    assert a[0].tolist() == b[0].tolist() and a[1].tolist() == b[1].tolist()


@given(
    hnp.arrays(np.float64, 20, elements=st.floats(0, 60)),
    st.floats(0, 0.5),
    st.floats(-10, 60),
    st.floats(0.05, 20),
)
def test_switch_blend_flavours_agree(loads, w, thr, scale):
    f_low = 0.05 * loads
    f_high = 0.3 * loads
    a = kernels.switch_blend_loop(loads, f_low, f_high, w, thr, scale)
    b = kernels.switch_blend_numpy(loads, f_low, f_high, w, thr, scale)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)


def test_rolling_slope_flavours_agree_on_long_trace():
    rng = np.random.default_rng(0)
    y = np.sin(np.linspace(0, 40, 5000)) + 0.05 * rng.normal(size=5000)
    np.testing.assert_allclose(
        kernels.rolling_slope_loop(y, 0.005, 50), kernels.rolling_slope_numpy(y, 0.005, 50), rtol=1e-9, atol=1e-9
    )


def _backend_under(env_value):
    env = dict(os.environ, FRICTION_SWITCH_NO_JIT=env_value)
    out = subprocess.run(
        [sys.executable, "-c", "import friction_switch.kernels as k; print(k.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return out.stdout.strip()


def test_env_flag_selects_numpy():
    assert _backend_under("1") == "numpy"


@pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")
def test_default_backend_is_numba():
    assert _backend_under("") == "numba"

"""Hot numeric kernels, each in a loop (numba) and a vectorized (numpy) flavour.

The public names (``rolling_slope``, ``find_runs``, ``switch_blend``) point at
the numba versions when :data:`friction_switch._jit.USE_NUMBA` is true and at
the numpy versions otherwise. Both flavours are importable under explicit
``*_loop`` / ``*_numpy`` names for testing and benchmarking.
"""
import numpy as np

from ._jit import USE_NUMBA, njit

__all__ = [
    "rolling_slope",
    "find_runs",
    "switch_blend",
    "rolling_slope_loop",
    "rolling_slope_numpy",
    "find_runs_loop",
    "find_runs_numpy",
    "switch_blend_loop",
    "switch_blend_numpy",
    "BACKEND",
]


# -- local regression slope ------------------------------------------------


@njit
def _window_slope(y, a, b, dt):
    m = b - a + 1
    if m < 2:
        return 0.0
    # centred offsets keep the sums small and free of cancellation
    c = 0.5 * (a + b)
    ybar = 0.0
    for j in range(a, b + 1):
        ybar += y[j]
    ybar /= m
    sxy = 0.0
    sxx = 0.0
    for j in range(a, b + 1):
        x = j - c
        sxy += x * (y[j] - ybar)
        sxx += x * x
    return sxy / (sxx * dt)


_RESYNC = 256


@njit
def rolling_slope_loop(y, dt, half):
    n = y.shape[0]
    out = np.empty(n)
    if n <= 2 * half:
        for i in range(n):
            out[i] = _window_slope(y, max(0, i - half), min(n - 1, i + half), dt)
        return out
    for i in range(half):
        out[i] = _window_slope(y, 0, i + half, dt)
        out[n - 1 - i] = _window_slope(y, n - 1 - i - half, n - 1, dt)
    # interior: t = sum_k k * y[i + k], s = sum_k y[i + k], slid in O(1)
    sxx = 0.0
    for k in range(-half, half + 1):
        sxx += k * k
    sxx *= dt
    t = 0.0
    s = 0.0
    for i in range(half, n - half):
        if (i - half) % _RESYNC == 0:
            t = 0.0
            s = 0.0
            for k in range(-half, half + 1):
                t += k * y[i + k]
                s += y[i + k]
        else:
            lead = y[i + half]
            tail = y[i - half - 1]
            s_prev = s
            s = s_prev + lead - tail
            t = t - s_prev + (half + 1) * tail + half * lead
        out[i] = t / sxx
    return out


def rolling_slope_numpy(y, dt, half):
    y = np.asarray(y, dtype=float)
    n = y.size
    out = np.empty(n)
    if n == 0:
        return out
    if n > 2 * half:
        k = np.arange(-half, half + 1, dtype=float)
        # correlate with the centred ramp: sum_k k * y[i + k]
        num = np.convolve(y, k[::-1], mode="valid")
        out[half:n - half] = num / (np.dot(k, k) * dt)
        edges = np.r_[0:half, n - half:n]
    else:
        edges = np.arange(n)
    for i in edges:
        a = max(0, i - half)
        b = min(n - 1, i + half)
        if b == a:
            out[i] = 0.0
            continue
        x = np.arange(a, b + 1) - 0.5 * (a + b)
        seg = y[a:b + 1]
        out[i] = np.dot(x, seg - seg.mean()) / (np.dot(x, x) * dt)
    return out


# -- run detection ---------------------------------------------------------


@njit
def find_runs_loop(mask, min_len):
    n = mask.shape[0]
    starts = np.empty(n, dtype=np.int64)
    ends = np.empty(n, dtype=np.int64)
    count = 0
    i = 0
    while i < n:
        if mask[i]:
            j = i
            while j < n and mask[j]:
                j += 1
            if j - i >= min_len:
                starts[count] = i
                ends[count] = j
                count += 1
            i = j
        else:
            i += 1
    return starts[:count].copy(), ends[:count].copy()


def find_runs_numpy(mask, min_len):
    mask = np.asarray(mask, dtype=bool)
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    starts, ends = edges[0::2], edges[1::2]
    keep = (ends - starts) >= min_len
    return starts[keep].astype(np.int64), ends[keep].astype(np.int64)


# -- sigmoid blend of two friction branches ------------------------------------
# written as lo + s*(hi - lo) so equal branches come back bit-exact


@njit
def switch_blend_loop(loads, f_low, f_high, weight, threshold, scale):
    n = loads.shape[0]
    out = np.empty(n)
    for i in range(n):
        z = (loads[i] - threshold) / scale
        if z >= 0.0:
            s = 1.0 / (1.0 + np.exp(-z))
        else:
            e = np.exp(z)
            s = e / (1.0 + e)
        lo = (1.0 + weight) * f_low[i]
        out[i] = lo + s * ((1.0 - weight) * f_high[i] - lo)
    return out


def _expit(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    e = np.exp(z[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def switch_blend_numpy(loads, f_low, f_high, weight, threshold, scale):
    s = _expit((np.asarray(loads, dtype=float) - threshold) / scale)
    lo = (1.0 + weight) * np.asarray(f_low, dtype=float)
    return lo + s * ((1.0 - weight) * np.asarray(f_high, dtype=float) - lo)


if USE_NUMBA:
    BACKEND = "numba"
    rolling_slope = rolling_slope_loop
    find_runs = find_runs_loop
    switch_blend = switch_blend_loop
else:
    BACKEND = "numpy"
    rolling_slope = rolling_slope_numpy
    find_runs = find_runs_numpy
    switch_blend = switch_blend_numpy

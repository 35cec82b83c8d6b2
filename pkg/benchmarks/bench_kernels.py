"""Compare the numba and numpy kernel flavours.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from friction_switch import kernels
from friction_switch._jit import NUMBA_AVAILABLE


def cases(n, rng):
    y = np.cumsum(rng.normal(0, 0.01, n))
    mask = np.abs(np.diff(y, prepend=y[0])) < 0.01
    loads = np.linspace(0.5, 50, n)
    return {
        "rolling_slope": ((y, 0.005, 50), kernels.rolling_slope_loop, kernels.rolling_slope_numpy),
        "find_runs": ((mask, 1), kernels.find_runs_loop, kernels.find_runs_numpy),
        "switch_blend": (
            (loads, 0.05 * loads, 0.24 * loads, 0.1, 4.3, 0.934),
            kernels.switch_blend_loop,
            kernels.switch_blend_numpy,
        ),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        print("numba not installed; loop kernels run as plain python")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<14}{'loop ms':>10}{'numpy ms':>10}{'ratio':>8}  max |diff|")
    for name, (a, loop, vec) in cases(args.n, rng).items():
        r1, r2 = loop(*a), vec(*a)  # also warms up the jit
        if isinstance(r1, tuple):
            diff = max(float(np.max(np.abs(x - y), initial=0)) for x, y in zip(r1, r2))
        else:
            diff = float(np.max(np.abs(r1 - r2)))
        t1 = min(timeit.repeat(lambda: loop(*a), number=1, repeat=args.repeat)) * 1e3
        t2 = min(timeit.repeat(lambda: vec(*a), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<14}{t1:>10.3f}{t2:>10.3f}{t2 / t1:>8.2f}  {diff:.2e}")


if __name__ == "__main__":
    main()

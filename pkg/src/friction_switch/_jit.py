"""Numba switch.

Set ``FRICTION_SWITCH_NO_JIT=1`` to force the pure-numpy kernels. When numba
is not importable the numpy kernels are used regardless of the flag.
"""
import os

_DISABLED = os.environ.get("FRICTION_SWITCH_NO_JIT", "").strip().lower() in ("1", "true", "yes", "on")

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not _DISABLED


def njit(func):
    """Compile ``func`` with ``numba.njit`` if numba is importable, else return it as-is.

    The decision ignores the env flag on purpose: the loop kernels stay
    callable (and testable against the numpy ones) even when the package
    dispatches to numpy.
    """
    if NUMBA_AVAILABLE:
        return numba.njit(cache=True, nogil=True)(func)
    return func

"""Numba toggle.

Hot kernels are written once and compiled with numba when it is importable.
Set ``SUPERLEVEL_NO_NUMBA=1`` before import to force the pure-numpy path.
"""

import os

_DISABLED = os.environ.get("SUPERLEVEL_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba

    if "NUMBA_THREADING_LAYER" not in os.environ:
        # skip the TBB probe; workqueue ships with every numba build
        numba.config.THREADING_LAYER = "workqueue"
    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAS_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


if HAS_NUMBA:
    prange = numba.prange
else:
    prange = range


def set_threads(count):
    """Cap the numba worker pool; a no-op on the numpy path."""
    if HAS_NUMBA and count:
        numba.set_num_threads(max(1, min(int(count), numba.config.NUMBA_NUM_THREADS)))


def backend():
    return "numba" if HAS_NUMBA else "numpy"

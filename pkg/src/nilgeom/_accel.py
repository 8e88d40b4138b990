"""Numba switch.

Set ``NILGEOM_NO_NUMBA=1`` to run every kernel through the pure numpy /
pure python path. The flag is read once, at import time.
"""
import os
import warnings

# numba probes for a TBB newer than the system one and falls back on its own
warnings.filterwarnings("ignore", message="The TBB threading layer")

_DISABLED = os.environ.get("NILGEOM_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba
    from numba import prange
    USE_NUMBA = True
except ImportError:  # pragma: no cover - exercised through the env flag
    numba = None
    prange = range
    USE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity otherwise."""
    kwargs.setdefault("cache", True)

    def wrap(fn):
        if USE_NUMBA:
            return numba.njit(**kwargs)(fn)
        return fn

    if args and callable(args[0]):
        return wrap(args[0])
    return wrap

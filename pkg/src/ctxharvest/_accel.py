"""Optional numba acceleration.

Kernels are written once in plain Python/numpy and decorated with ``njit``.
Setting ``CTXHARVEST_DISABLE_NUMBA=1`` (or running without numba installed)
leaves them as ordinary Python functions.
"""

import os

_FLAG = "CTXHARVEST_DISABLE_NUMBA"


def _numba_wanted():
    return os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


try:
    if not _numba_wanted():
        raise ImportError
    import numba as _numba

    ENABLED = True
except ImportError:
    _numba = None
    ENABLED = False


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if ENABLED:
        kwargs.setdefault("cache", True)
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(fn):
        return fn

    return wrap


def backend():
    return "numba" if ENABLED else "python"

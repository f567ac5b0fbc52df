"""Numba switch.

Hot kernels are written once as plain Python loops and compiled with
``numba.njit`` when available. Setting ``MFDF_DISABLE_NUMBA=1`` (or having no
numba installed) selects the vectorised numpy fallbacks instead.
"""
import os

_FALSEY = {"", "0", "false", "no", "off"}


def _numba_requested():
    return os.environ.get("MFDF_DISABLE_NUMBA", "").strip().lower() in _FALSEY


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _numba_requested()


def njit(func):
    """Compile ``func`` with numba (cached, no fastmath) if numba is importable."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, fastmath=False)(func)


def pick(numba_impl, numpy_impl):
    return numba_impl if USE_NUMBA else numpy_impl

"""Numba switch.

Kernels in :mod:`e7theta.kernels` come in two flavours: an ``@njit`` loop
version and a vectorised numpy version.  Set ``E7THETA_DISABLE_NUMBA=1`` to
force the numpy path (also used automatically when numba is not importable).
"""

import os

_DISABLED = os.environ.get("E7THETA_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(func=None, **_kwargs):
        if callable(func):
            return func
        return lambda f: f


def use_numba() -> bool:
    """Whether dispatching kernels should take the numba path."""
    return NUMBA_AVAILABLE


__all__ = ["njit", "NUMBA_AVAILABLE", "use_numba"]

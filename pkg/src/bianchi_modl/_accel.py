"""Numba switch for the hot F_p kernels.

Set ``BIANCHI_MODL_DISABLE_NUMBA=1`` to run the pure-numpy fallbacks instead
of the compiled kernels (useful for debugging and for the benchmark).
"""

import os
from typing import Any, Callable

_DISABLED = os.environ.get("BIANCHI_MODL_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag
    HAVE_NUMBA = False

    def _njit(*args: Any, **kwargs: Any) -> Callable:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def njit(*args: Any, **kwargs: Any) -> Callable:
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return _njit(*args, **kwargs)


def use_numba() -> bool:
    return HAVE_NUMBA

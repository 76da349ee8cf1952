"""Kernel backend selection.

Hot loops are compiled with numba when it is importable. Setting
``BOOLFN_DISABLE_NUMBA=1`` forces the pure-numpy implementations; the choice
is made once, at import time.
"""

from __future__ import annotations

import os

_FALSY = ("", "0", "false", "no", "off")

USE_NUMBA = os.environ.get("BOOLFN_DISABLE_NUMBA", "").strip().lower() in _FALSY

if USE_NUMBA:
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` with caching, or an identity decorator without numba."""
    if not USE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn
    import numba

    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return numba.njit(*args, **kwargs)


def pick(nb_impl, np_impl):
    """Return the implementation matching the active backend."""
    return nb_impl if USE_NUMBA else np_impl

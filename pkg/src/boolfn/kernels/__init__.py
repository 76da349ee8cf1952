"""Compiled (numba) and vectorised (numpy) inner loops."""

from __future__ import annotations

from .._backend import BACKEND, USE_NUMBA

__all__ = ["BACKEND", "USE_NUMBA"]

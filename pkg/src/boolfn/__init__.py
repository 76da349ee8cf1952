"""Constructions, metrics and searches for cryptographic Boolean functions."""

from __future__ import annotations

from ._backend import BACKEND
from .core import (
    AnfCoefficients,
    TruthTable,
    VectorialTable,
    WalshSpectrum,
    bin_of,
    component,
    compose,
    crb,
    degree,
    int_of,
    lcrb,
    llb,
    moebius,
    nonlinearity,
    reverse,
    walsh_transform,
    weight,
)

__version__ = "0.1.0"
CONVENTION = "LSB"  # x_1 is bit 0 of int(x)

__all__ = [
    "BACKEND",
    "CONVENTION",
    "AnfCoefficients",
    "TruthTable",
    "VectorialTable",
    "WalshSpectrum",
    "bin_of",
    "component",
    "compose",
    "crb",
    "degree",
    "int_of",
    "lcrb",
    "llb",
    "moebius",
    "nonlinearity",
    "reverse",
    "walsh_transform",
    "weight",
]

"""Function families: HWB and its vectorial/post-processed forms, the
interval bijection and IntHWB, Carlet-Feng, cyclic weightwise and inverse-map
components."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import catalog
from .core import DimensionError, TruthTable, VectorialTable, check_n, compose, nonlinearity_packed
from .gf2poly import Gf2Poly
from .kernels import scans


# ------------------------------------------------------------------------ HWB


def hwb(n: int) -> TruthTable:
    """``f(x) = x_wt(x)`` with ``x_0 = 0``."""
    check_n(n)
    i = np.arange(1 << n, dtype=np.int64)
    w = np.bitwise_count(i).astype(np.int64)
    bits = np.where(w > 0, (i >> np.maximum(w - 1, 0)) & 1, 0)
    return TruthTable(n, bits)


def hwb_vec(n: int, r: int) -> VectorialTable:
    """Window ``(x_l, ..., x_(l+r-1))`` with cyclic indices; ``x_l`` is bit 0
    of the output word."""
    check_n(n)
    if not 1 <= r <= n:
        raise DimensionError(f"need 1 <= r <= n, got r={r}, n={n}")
    return VectorialTable(n, r, scans.hwb_words(n, r))


def lambda_hwb(n: int, lam: TruthTable) -> TruthTable:
    return compose(lam, hwb_vec(n, lam.n))


# ---------------------------------------------------------- interval machinery


@dataclass(frozen=True)
class IntervalParams:
    n: int
    w0: int
    s: int

    def __post_init__(self) -> None:
        check_n(self.n)
        if not 1 <= self.s <= self.n - 1:
            raise ValueError(f"s must satisfy 1 <= s <= n-1, got s={self.s}, n={self.n}")
        if not 0 <= self.w0 < 1 << self.n:
            raise ValueError(f"w0 must lie in [0, 2^{self.n}), got {self.w0}")

    @property
    def size(self) -> int:
        return 1 << (self.n - self.s)

    def anchor(self, k: int) -> int:
        return (self.w0 + k * self.size) % (1 << self.n)

    def interval(self, k: int) -> np.ndarray:
        return (self.anchor(k) + np.arange(self.size, dtype=np.int64)) % (1 << self.n)


def interval_index(p: IntervalParams, i: int) -> int:
    N = 1 << p.n
    if not 0 <= i < N:
        raise ValueError("index out of range")
    return (i - p.w0) // p.size if i >= p.w0 else (i + N - p.w0) // p.size


def interval_bijection(p: IntervalParams, i):
    """``B(i)``: inside interval k, the offset from w_k is multiplied by the
    odd number 2k + 1 modulo the interval size. Accepts ints or arrays."""
    out = scans.interval_bijection_np(i, p.n, p.w0, p.s)
    return int(out) if np.ndim(out) == 0 else out


def phi(p: IntervalParams, i):
    """``B``, then reversal of the n-bit string, then ``B`` again."""
    j = scans.interval_bijection_np(i, p.n, p.w0, p.s)
    j = scans.reverse_bits_np(j, p.n)
    out = scans.interval_bijection_np(j, p.n, p.w0, p.s)
    return int(out) if np.ndim(out) == 0 else out


def phi_point(p: IntervalParams, x) -> tuple[int, ...]:
    from .core import bin_of, int_of

    return bin_of(phi(p, int_of(x)), p.n)


def phi_table(p: IntervalParams) -> np.ndarray:
    return scans.phi_table(p.n, p.w0, p.s)


def _lam_table(lam: TruthTable | str) -> TruthTable:
    return catalog.lambda_by_id(lam) if isinstance(lam, str) else lam


def int_hwb(p: IntervalParams, lam: TruthTable | str) -> TruthTable:
    """``lambda(HWB_{n,r}(phi(x)))`` with r the arity of lambda."""
    lam = _lam_table(lam)
    if lam.n > p.n:
        raise DimensionError("lambda has more variables than n")
    hww = scans.hwb_words(p.n, lam.n)
    return TruthTable(p.n, lam.table[hww[phi_table(p)]])


def int_hwb_single_stage(p: IntervalParams, lam: TruthTable | str) -> TruthTable:
    """Variant with one application of B (no reversal, no second stage)."""
    lam = _lam_table(lam)
    hww = scans.hwb_words(p.n, lam.n)
    j = scans.interval_bijection_np(np.arange(1 << p.n, dtype=np.int64), p.n, p.w0, p.s)
    return TruthTable(p.n, lam.table[hww[j]])


def int_hwb_packed(p: IntervalParams, lam: TruthTable | str) -> np.ndarray:
    """Bit-packed IntHWB table (8x smaller), for n up to 30."""
    lam = _lam_table(lam)
    return scans.inthwb_packed(p.n, p.w0, p.s, np.ascontiguousarray(lam.table), lam.n)


def int_hwb_nonlinearity(p: IntervalParams, lam: TruthTable | str) -> int:
    return nonlinearity_packed(int_hwb_packed(p, lam), p.n)


# --------------------------------------------------------------- Carlet-Feng


def _poly(n: int, tau: Gf2Poly | None) -> Gf2Poly:
    check_n(n)
    tau = catalog.poly_for(n) if tau is None else tau
    if tau.degree != n:
        raise ValueError(f"polynomial degree {tau.degree} != n = {n}")
    return tau


def cf_function(n: int, tau: Gf2Poly | None = None, *, check: bool = True) -> TruthTable:
    """Support ``{0} U {x^i mod tau : 0 <= i <= 2^(n-1) - 2}``; the polynomial
    with coefficient vector a sits at table index ``sum a_i 2^i``."""
    tau = _poly(n, tau)
    if check and not tau.is_primitive():
        raise ValueError(f"{tau.to_text()} is not primitive")
    return TruthTable(n, scans.cf_support(n, tau.bits, False).astype(np.uint8))


def cf_packed(n: int, tau: Gf2Poly | None = None) -> np.ndarray:
    tau = _poly(n, tau)
    return scans.cf_support(n, tau.bits, True)


def cf_nonlinearity(n: int, tau: Gf2Poly | None = None) -> int:
    return nonlinearity_packed(cf_packed(n, tau), n)


# ----------------------------------------------------------- cyclic weightwise


def quadratic_g(n: int) -> TruthTable:
    """``x_1 + sum_i x_(2i) x_(2i+1)``."""
    check_n(n)
    i = np.arange(1 << n, dtype=np.int64)
    out = i & 1
    for a in range(2, n, 2):
        out ^= ((i >> (a - 1)) & 1) & ((i >> a) & 1)
    return TruthTable(n, out)


def cyclic_weightwise(n: int, g: TruthTable, direction: str = "right") -> TruthTable:
    """``f(x) = g(x >>> (w - 1))`` for ``w = wt(x) >= 1`` and ``g(x)`` at w = 0.

    A right shift moves x_j to position j + 1; with x_1 in bit 0 that is a
    left rotation of the integer."""
    if g.n != n:
        raise DimensionError("g must have n variables")
    i = np.arange(1 << n, dtype=np.int64)
    w = np.bitwise_count(i).astype(np.int64)
    shift = np.maximum(w - 1, 0) % n
    full = (1 << n) - 1
    if direction == "left":
        shift = (n - shift) % n
    elif direction != "right":
        raise ValueError("direction must be 'right' or 'left'")
    y = ((i << shift) | (i >> ((n - shift) % n))) & full
    return TruthTable(n, g.table[y])


# ------------------------------------------------------------------- inverse


def inverse_table(n: int, rho: Gf2Poly) -> np.ndarray:
    check_n(n)
    if rho.degree != n:
        raise ValueError(f"polynomial degree {rho.degree} != n = {n}")
    if not rho.is_irreducible():
        raise ValueError(f"{rho.to_text()} is reducible")
    return scans.inverse_table(n, rho.bits)


def inverse_map_component(n: int, rho: Gf2Poly | None = None, alpha: int = 1) -> TruthTable:
    """``<alpha, inv(a)>`` with ``inv(0) = 0``."""
    rho = _poly(n, rho)
    if not 0 < alpha < 1 << n:
        raise ValueError("alpha must be a non-zero n-bit word")
    inv = inverse_table(n, rho)
    return TruthTable(n, np.bitwise_count(inv & alpha).astype(np.uint8) & 1)


__all__ = [
    "IntervalParams",
    "cf_function",
    "cf_nonlinearity",
    "cf_packed",
    "cyclic_weightwise",
    "hwb",
    "hwb_vec",
    "int_hwb",
    "int_hwb_nonlinearity",
    "int_hwb_packed",
    "int_hwb_single_stage",
    "interval_bijection",
    "interval_index",
    "inverse_map_component",
    "inverse_table",
    "lambda_hwb",
    "phi",
    "phi_point",
    "quadratic_g",
]

"""Annihilators, algebraic immunity, FAA profiles and fast algebraic immunity.

Two routes to the annihilator question are provided.

``method="monomial"``
    rows are the support points, columns the monomials of degree <= k,
    entry ``[alpha <= x]``; a kernel vector is the ANF of an annihilator.

``method="reduced"`` (default)
    a function of degree <= k is fixed by its values on ``W_k`` (points of
    weight <= k), and at any x

        g(x) = sum_{z <= x, wt z <= k} g(z) * c(wt x - wt z, k - wt z)

    with ``c(m, t) = sum_{j <= t} C(m, j) mod 2``. Values on support points of
    weight <= k are forced to zero, so the unknowns are the non-support points
    of ``W_k`` and the equations are the support points outside ``W_k``. The
    matrix is roughly a quarter of the monomial one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import AnfCoefficients, TruthTable, moebius_array, pack_bits
from .kernels import builders, linalg


class BudgetExceeded(RuntimeError):
    """Raised when a rank computation would exceed the configured size."""


# Matrix cells (rows x columns) above which a computation is refused.
DEFAULT_BUDGET = 4 * 10**9


@dataclass(frozen=True)
class AiReport:
    ai: int
    witness_side: str  # "f", "1+f" or "" for constants
    witness_anf: AnfCoefficients | None

    def verify(self, t: TruthTable) -> bool:
        if self.witness_anf is None:
            return self.ai == 0
        g = self.witness_anf.to_table().table
        side = t.table if self.witness_side == "f" else t.table ^ 1
        return bool(g.any()) and self.witness_anf.degree == self.ai and not np.any(g & side)


@dataclass(frozen=True)
class FaaProfile:
    n: int
    pairs: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def as_list(self) -> list[tuple[int, int]]:
        return list(self.pairs)

    def __str__(self) -> str:
        return ", ".join(f"({e},{d})" for e, d in self.pairs)


@lru_cache(maxsize=None)
def _weights(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)


@lru_cache(maxsize=None)
def _cpar(n: int) -> np.ndarray:
    """``cpar[m, t] = sum_{j <= t} C(m, j) mod 2`` for 0 <= m, t <= n."""
    out = np.zeros((n + 1, n + 1), dtype=np.uint8)
    for m in range(n + 1):
        acc = 0
        for t in range(n + 1):
            acc += math.comb(m, t)
            out[m, t] = acc & 1
    return out


@lru_cache(maxsize=None)
def graded_monomials(n: int, k: int) -> np.ndarray:
    """Monomials of degree <= k ordered by (weight, integer)."""
    wt = _weights(n)
    idx = np.flatnonzero(wt <= k)
    return idx[np.lexsort((idx, wt[idx]))].astype(np.int64)


def _check_budget(rows: int, cols: int, budget: int | None) -> None:
    if budget is not None and rows * cols > budget:
        raise BudgetExceeded(f"{rows} x {cols} GF(2) matrix exceeds the budget of {budget} cells")


def _reduced_problem(t: TruthTable, k: int):
    wt = _weights(t.n)
    in_w = wt <= k
    cols = np.flatnonzero(in_w & (t.table == 0)).astype(np.int64)
    rows = np.flatnonzero(~in_w & (t.table == 1)).astype(np.int64)
    return rows, cols


def _witness_from_values(n: int, k: int, cols: np.ndarray, vec: np.ndarray) -> AnfCoefficients:
    u = np.zeros(1 << n, dtype=np.uint8)
    u[cols] = vec
    coeffs = moebius_array(u)
    coeffs[_weights(n) > k] = 0
    return AnfCoefficients(n, coeffs)


def annihilator_rank_deficient(t: TruthTable, k: int, budget: int | None = DEFAULT_BUDGET) -> bool:
    """Whether a non-zero annihilator of degree <= k exists (no witness)."""
    rows, cols = _reduced_problem(t, k)
    if cols.size == 0:
        return False
    if rows.size < cols.size:
        return True
    _check_budget(rows.size, cols.size, budget)
    m = builders.fill_reduced(rows, cols, _weights(t.n), _cpar(t.n), k)
    ranks = linalg.rank_profile(m, cols.size, np.array([cols.size], dtype=np.int64))
    return int(ranks[0]) < cols.size


def has_annihilator(
    t: TruthTable, k: int, *, method: str = "reduced", budget: int | None = DEFAULT_BUDGET
) -> AnfCoefficients | None:
    """A non-zero g with deg g <= k and g * t = 0, or None."""
    n = t.n
    if not 0 <= k <= n:
        raise ValueError(f"degree bound must lie in 0..{n}")
    if method == "reduced":
        rows, cols = _reduced_problem(t, k)
        if cols.size == 0:
            return None
        if rows.size == 0:
            vec = np.zeros(cols.size, dtype=np.uint8)
            vec[0] = 1
        else:
            _check_budget(rows.size, cols.size, budget)
            m = builders.fill_reduced(rows, cols, _weights(n), _cpar(n), k)
            vec = linalg.nullspace_vector(m, cols.size)
            if vec.size == 0:
                return None
        g = _witness_from_values(n, k, cols, vec)
    elif method == "monomial":
        rows = t.support().astype(np.int64)
        cols = graded_monomials(n, k)
        if rows.size == 0:
            vec = np.zeros(cols.size, dtype=np.uint8)
            vec[0] = 1
        else:
            _check_budget(rows.size, cols.size, budget)
            m = builders.fill_subset(rows, cols)
            vec = linalg.nullspace_vector(m, cols.size)
            if vec.size == 0:
                return None
        coeffs = np.zeros(1 << n, dtype=np.uint8)
        coeffs[cols] = vec
        g = AnfCoefficients(n, coeffs)
    else:
        raise ValueError(f"unknown method {method!r}")
    gt = g.to_table().table
    if not gt.any() or np.any(gt & t.table) or g.degree > k:
        raise AssertionError("annihilator witness failed pointwise verification")
    return g


def algebraic_immunity(
    t: TruthTable,
    *,
    witness: bool = True,
    method: str = "reduced",
    budget: int | None = DEFAULT_BUDGET,
) -> AiReport:
    """Smallest k with an annihilator of degree k for f or 1 + f.

    With ``witness=False`` the minimal degree is decided by rank alone and no
    ANF is returned (much cheaper when the matrix has more columns than rows).
    """
    n = t.n
    w = t.weight
    if w == 0 or w == 1 << n:
        one = np.zeros(1 << n, dtype=np.uint8)
        one[0] = 1
        return AiReport(0, "f" if w == 0 else "1+f", AnfCoefficients(n, one)) if witness else AiReport(0, "", None)
    comp = t.complement()
    for k in range(1, (n + 1) // 2 + 1):
        for side, tt in (("f", t), ("1+f", comp)):
            if witness:
                g = has_annihilator(tt, k, method=method, budget=budget)
                if g is not None:
                    return AiReport(k, side, g)
            elif annihilator_rank_deficient(tt, k, budget):
                return AiReport(k, side, None)
    raise AssertionError(f"no annihilator up to degree ceil(n/2) = {(n + 1) // 2}")


# ------------------------------------------------------------------------ FAA


def _faa_columns(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All monomials sorted by weight descending then integer, and
    ``prefix_end[d + 1]``, the number of monomials of weight > d."""
    wt = _weights(n)
    idx = np.arange(1 << n, dtype=np.int64)
    order = idx[np.lexsort((idx, -wt))]
    counts = np.bincount(wt, minlength=n + 1)
    prefix_end = np.array([int(counts[d + 1 :].sum()) for d in range(-1, n + 1)], dtype=np.int64)
    return order, prefix_end


def _faa_rank_profile(t: TruthTable, e: int, budget: int | None) -> tuple[int, np.ndarray]:
    """Rows: ANF(X^gamma * f) for deg gamma <= e; returns (row count, ranks)
    where ``ranks[d + 1]`` is the rank restricted to monomials of weight > d."""
    n = t.n
    gammas = graded_monomials(n, e)
    order, prefix_end = _faa_columns(n)
    _check_budget(gammas.size, order.size, budget)
    m = builders.fill_faa(pack_bits(t.table), n, gammas, order)
    ends = prefix_end[::-1].copy()  # increasing: weight > n, > n-1, ..., > -1
    ranks = linalg.rank_profile(m, order.size, ends)
    return gammas.size, ranks[::-1].copy()


def faa_pair_exists(t: TruthTable, e: int, d: int, budget: int | None = DEFAULT_BUDGET) -> bool:
    """Whether some non-zero g with deg g <= e has deg(g * f) <= d."""
    n = t.n
    if not (0 <= e <= n and -1 <= d <= n):
        raise ValueError("e or d out of range")
    rows, ranks = _faa_rank_profile(t, e, budget)
    return int(ranks[d + 1]) < rows


def faa_profile(
    t: TruthTable, *, ai: int | None = None, max_e: int | None = None, budget: int | None = DEFAULT_BUDGET
) -> FaaProfile:
    """For e = 1..AI-1 the largest d <= n-1-e admitting no pair (g, h) with
    deg g = e, deg h = d and g f = h.

    One elimination per e: columns are taken in decreasing monomial weight,
    so the rank of every "weight > d" column block is read off a single pass.
    Non-existence at d is full row rank on that block.
    """
    n = t.n
    if ai is None:
        ai = algebraic_immunity(t, witness=False, budget=budget).ai
    top = ai - 1 if max_e is None else min(ai - 1, max_e)
    pairs = []
    for e in range(1, top + 1):
        rows, ranks = _faa_rank_profile(t, e, budget)
        full = [d for d in range(-1, n) if int(ranks[d + 1]) == rows]
        d0 = max(full) if full else -1
        pairs.append((e, min(n - 1 - e, d0)))
    return FaaProfile(n, tuple(pairs))


def fai(t: TruthTable, *, ai: int | None = None, profile: FaaProfile | None = None) -> int:
    if ai is None:
        ai = algebraic_immunity(t, witness=False).ai
    if profile is None:
        profile = faa_profile(t, ai=ai)
    best = 2 * ai
    for e, d in profile:
        best = min(best, e + d + 1)
    if ai >= 1 and not (1 + ai <= best <= 2 * ai):
        raise AssertionError(f"FAI {best} outside [AI + 1, 2 AI]")
    return best

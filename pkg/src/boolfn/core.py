"""Boolean and vectorial functions: representations and spectral metrics.

Coordinate convention: for a point ``x = (x_1, ..., x_n)`` the integer
``int(x)`` carries ``x_j`` in bit ``j - 1`` (``x_1`` is the least significant
bit). Truth tables are indexed by that integer, so entry ``i`` of a table is
``f(bin_n(i))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .kernels import transforms as tr

MAX_N = 30
ZERO_DEGREE = -1  # degree of the zero function (max over an empty set)


class DimensionError(ValueError):
    pass


# -------------------------------------------------------------------- points


def weight(x: Sequence[int]) -> int:
    return int(sum(1 for b in x if b))


def int_of(x: Sequence[int]) -> int:
    """Integer whose bit ``j - 1`` is ``x_j``."""
    return sum(int(b) << j for j, b in enumerate(x))


def bin_of(i: int, n: int) -> tuple[int, ...]:
    if not 0 <= i < (1 << n):
        raise ValueError(f"{i} does not fit in {n} bits")
    return tuple((i >> j) & 1 for j in range(n))


def reverse(x: Sequence[int]) -> tuple[int, ...]:
    return tuple(x)[::-1]


def reverse_int(i: int, n: int) -> int:
    """``int(reverse(bin_of(i, n)))``."""
    return int(f"{i:0{n}b}"[::-1], 2) if n else 0


def check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise DimensionError(f"n must lie in 1..{MAX_N}, got {n}")


# -------------------------------------------------------------- truth tables


@dataclass(frozen=True, eq=False)
class TruthTable:
    """An n-variable Boolean function; ``table[i] = f(bin_n(i))``."""

    n: int
    table: np.ndarray

    def __post_init__(self) -> None:
        check_n(self.n)
        t = np.ascontiguousarray(self.table, dtype=np.uint8)
        if t.shape != (1 << self.n,):
            raise DimensionError(f"table length {t.shape} is not 2^{self.n}")
        if t.size and t.max() > 1:
            raise ValueError("truth table entries must be 0 or 1")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    @classmethod
    def from_string(cls, s: str) -> "TruthTable":
        s = s.strip()
        n = len(s).bit_length() - 1
        if len(s) != 1 << n or set(s) - {"0", "1"}:
            raise ValueError("expected a 0/1 string of length 2^n")
        return cls(n, np.frombuffer(s.encode(), dtype=np.uint8) - ord("0"))

    @classmethod
    def constant(cls, n: int, value: int) -> "TruthTable":
        return cls(n, np.full(1 << n, value & 1, dtype=np.uint8))

    def to_string(self) -> str:
        return (self.table + ord("0")).tobytes().decode()

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.table))

    @property
    def is_balanced(self) -> bool:
        return 2 * self.weight == self.table.size

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.table)

    def complement(self) -> "TruthTable":
        return TruthTable(self.n, self.table ^ 1)

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        if other.n != self.n:
            raise DimensionError("xor of functions on different n")
        return TruthTable(self.n, self.table ^ other.table)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TruthTable) and other.n == self.n and bool(np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))

    def __repr__(self) -> str:
        body = self.to_string() if self.n <= 6 else f"wt={self.weight}"
        return f"TruthTable(n={self.n}, {body})"


@dataclass(frozen=True, eq=False)
class AnfCoefficients:
    """ANF coefficients; ``coeffs[int(alpha)] = a_alpha``."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.ascontiguousarray(self.coeffs, dtype=np.uint8)
        if c.shape != (1 << self.n,):
            raise DimensionError(f"coefficient vector length {c.shape} is not 2^{self.n}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        idx = np.flatnonzero(self.coeffs)
        if idx.size == 0:
            return ZERO_DEGREE
        return int(np.bitwise_count(idx).max())

    def monomials(self) -> list[int]:
        return [int(a) for a in np.flatnonzero(self.coeffs)]

    def to_table(self) -> TruthTable:
        return TruthTable(self.n, moebius_array(self.coeffs))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AnfCoefficients) and other.n == self.n and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs.tobytes()))

    def to_text(self) -> str:
        """Monomials as ``X1X2+X3+1``, graded by degree then integer."""
        terms = sorted(self.monomials(), key=lambda a: (-int(a).bit_count(), _var_key(a)))
        if not terms:
            return "0"
        return "+".join(_monomial_text(a) for a in terms)

    @classmethod
    def from_text(cls, n: int, text: str) -> "AnfCoefficients":
        c = np.zeros(1 << n, dtype=np.uint8)
        text = text.replace(" ", "").replace("⊕", "+")
        if text != "0":
            for term in text.split("+"):
                if term == "1":
                    alpha = 0
                else:
                    alpha = 0
                    for v in term.split("X")[1:]:
                        j = int(v)
                        if not 1 <= j <= n:
                            raise ValueError(f"variable X{j} out of range for n={n}")
                        alpha |= 1 << (j - 1)
                c[alpha] ^= 1
        return cls(n, c)


def _var_key(alpha: int) -> list[int]:
    return [j for j in range(alpha.bit_length()) if alpha >> j & 1]


def _monomial_text(alpha: int) -> str:
    if alpha == 0:
        return "1"
    return "".join(f"X{j + 1}" for j in _var_key(alpha))


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.ascontiguousarray(self.values, dtype=np.int32)
        if v.shape != (1 << self.n,):
            raise DimensionError("spectrum length is not 2^n")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def parseval_ok(self) -> bool:
        return int(np.sum(self.values.astype(np.int64) ** 2)) == 1 << (2 * self.n)

    @property
    def max_abs(self) -> int:
        return int(np.abs(self.values).max())


@dataclass(frozen=True, eq=False)
class VectorialTable:
    """An (n, r) function; ``entries[i]`` is the int of the r output bits,
    output coordinate ``f_j`` in bit ``j - 1``."""

    n: int
    r: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.r <= self.n:
            raise DimensionError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        e = np.ascontiguousarray(self.entries, dtype=np.int64)
        if e.shape != (1 << self.n,):
            raise DimensionError("entries length is not 2^n")
        if e.size and (e.min() < 0 or e.max() >= 1 << self.r):
            raise ValueError("entries must be r-bit words")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    def preimage_counts(self) -> np.ndarray:
        return np.bincount(self.entries, minlength=1 << self.r)

    @property
    def is_balanced(self) -> bool:
        return bool(np.all(self.preimage_counts() == 1 << (self.n - self.r)))

    def coordinate(self, j: int) -> TruthTable:
        return TruthTable(self.n, (self.entries >> (j - 1)) & 1)


# ------------------------------------------------------------------ transforms


def moebius_array(bits: np.ndarray) -> np.ndarray:
    out = np.array(bits, dtype=np.uint8, copy=True)
    tr.moebius(out)
    return out


def moebius(t: TruthTable) -> AnfCoefficients:
    """ANF of ``t``; the same butterfly maps coefficients back to values."""
    return AnfCoefficients(t.n, moebius_array(t.table))


def anf_to_table(a: AnfCoefficients) -> TruthTable:
    return a.to_table()


def degree(t: TruthTable) -> int:
    """Algebraic degree, or ``ZERO_DEGREE`` for the zero function."""
    return moebius(t).degree


def walsh_transform(t: TruthTable) -> WalshSpectrum:
    return WalshSpectrum(t.n, tr.walsh(t.table))


def nonlinearity(t: TruthTable) -> int:
    if t.n >= 24:
        return nonlinearity_packed(pack_bits(t.table), t.n)
    return (1 << (t.n - 1)) - int(tr.max_abs(tr.walsh(t.table))) // 2


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Little-endian bit packing into uint64 words (bit i in word i >> 6)."""
    bits = np.asarray(bits, dtype=np.uint8)
    pad = (-bits.size) % 64
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    return np.packbits(bits, bitorder="little").view(np.uint64)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    return np.unpackbits(words.view(np.uint8), bitorder="little")[: 1 << n]


def nonlinearity_packed(words: np.ndarray, n: int) -> int:
    """Nonlinearity of a bit-packed table; memory is 2 bytes per entry."""
    return (1 << (n - 1)) - int(tr.walsh_max_abs_packed(words, n)) // 2


def llb(t: TruthTable | None = None, *, nl: int | None = None, n: int | None = None) -> float:
    """log2 of the linear bias, ``log2(1/2 - nl/2^n)``."""
    if t is not None:
        nl, n = nonlinearity(t), t.n
    if nl is None or n is None:
        raise TypeError("pass a table or both nl and n")
    bias = 0.5 - nl / float(1 << n)
    if bias <= 0:
        raise ValueError("bias is zero or negative")
    return math.log2(bias)


def crb(n: int) -> int:
    """Covering radius bound ``2^(n-1) - floor(2^(n/2 - 1))``."""
    return (1 << (n - 1)) - math.floor(2.0 ** (n / 2 - 1))


def lcrb(n: int) -> float:
    return llb(nl=crb(n), n=n)


def fmt2(x: float) -> str:
    """Two decimals, ties to even."""
    return f"{round(x, 2):.2f}"


# --------------------------------------------------------- vectorial helpers


def component(F: VectorialTable, alpha: int) -> TruthTable:
    """``<alpha, F>``: XOR of the coordinates selected by the bits of alpha."""
    if not 0 <= alpha < 1 << F.r:
        raise ValueError("alpha must be an r-bit word")
    return TruthTable(F.n, np.bitwise_count(F.entries & alpha).astype(np.uint8) & 1)


def compose(lam: TruthTable, F: VectorialTable) -> TruthTable:
    if lam.n != F.r:
        raise DimensionError(f"lambda has {lam.n} variables but F has {F.r} outputs")
    return TruthTable(F.n, lam.table[F.entries])


# -------------------------------------------------------------------- file I/O


def dumps(t: TruthTable, fmt: str = "tt") -> str:
    if fmt == "tt":
        return f"n={t.n}\n{t.to_string()}\n"
    if fmt == "hex":
        return f"n={t.n}\n{to_hex(t)}\n"
    raise ValueError(f"unknown format {fmt!r}")


def loads(text: str, fmt: str = "tt") -> TruthTable:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("missing 'n=<int>' header")
    try:
        n = int(lines[0][2:])
    except ValueError as exc:
        raise ValueError(f"bad header {lines[0]!r}") from exc
    check_n(n)
    body = "".join(lines[1:])
    t = TruthTable.from_string(body) if fmt == "tt" else from_hex(body, n)
    if t.n != n:
        raise ValueError(f"header says n={n} but the body has {len(body)} symbols")
    return t


def to_hex(t: TruthTable) -> str:
    """Four table bits per nibble, ``f_(4k)`` in the nibble's low bit."""
    bits = t.table
    if bits.size % 4:
        bits = np.concatenate([bits, np.zeros(4 - bits.size % 4, dtype=np.uint8)])
    nib = bits.reshape(-1, 4) @ np.array([1, 2, 4, 8], dtype=np.uint8)
    return "".join("0123456789abcdef"[v] for v in nib)


def from_hex(body: str, n: int) -> TruthTable:
    body = body.strip().lower()
    want = max(1, (1 << n) // 4)
    if len(body) != want:
        raise ValueError(f"expected {want} hex digits for n={n}, got {len(body)}")
    vals = np.array([int(c, 16) for c in body], dtype=np.uint8)
    bits = ((vals[:, None] >> np.arange(4, dtype=np.uint8)) & 1).reshape(-1)[: 1 << n]
    if (1 << n) < 4 and vals[0] >> (1 << n):
        raise ValueError("padding bits must be zero")
    return TruthTable(n, bits)


def save(t: TruthTable, path: str | Path) -> None:
    path = Path(path)
    path.write_text(dumps(t, "hex" if path.suffix == ".hex" else "tt"))


def load(path: str | Path) -> TruthTable:
    path = Path(path)
    return loads(path.read_text(), "hex" if path.suffix == ".hex" else "tt")

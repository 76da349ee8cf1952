"""Polynomials over GF(2) stored as Python ints (coefficient of x^i = bit i)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache


def clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def pmod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def mulmod(a: int, b: int, m: int) -> int:
    return pmod(clmul(a, b), m)


def powmod(a: int, e: int, m: int) -> int:
    out = 1
    a = pmod(a, m)
    while e:
        if e & 1:
            out = mulmod(out, a, m)
        a = mulmod(a, a, m)
        e >>= 1
    return out


def pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, pmod(a, b)
    return a


@lru_cache(maxsize=None)
def prime_factors(m: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return tuple(out)


@dataclass(frozen=True)
class Gf2Poly:
    bits: int

    @property
    def degree(self) -> int:
        return self.bits.bit_length() - 1

    def is_irreducible(self) -> bool:
        """Rabin's test: x^(2^n) = x mod p and gcd(x^(2^(n/q)) - x, p) = 1."""
        n = self.degree
        if n < 1:
            return False
        p = self.bits

        def frob(k: int) -> int:
            y = 2
            for _ in range(k):
                y = mulmod(y, y, p)
            return y

        if frob(n) != pmod(2, p):
            return False
        return all(pgcd(frob(n // q) ^ pmod(2, p), p) == 1 for q in prime_factors(n))

    def is_primitive(self) -> bool:
        """Irreducible and x has multiplicative order exactly 2^n - 1."""
        n = self.degree
        if n < 1 or not self.is_irreducible():
            return False
        order = (1 << n) - 1
        if order == 1:
            return True
        return all(powmod(2, order // q, self.bits) != 1 for q in prime_factors(order))

    def to_text(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            if self.bits >> i & 1:
                terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
        return "+".join(terms) or "0"

    @classmethod
    def from_exponents(cls, exps) -> "Gf2Poly":
        b = 0
        for e in exps:
            b ^= 1 << int(e)
        return cls(b)

    @classmethod
    def parse(cls, text: str) -> "Gf2Poly":
        """Accepts ``x^13+x^4+x^3+x+1`` or a comma list of exponents."""
        text = text.replace(" ", "")
        if re.fullmatch(r"\d+(,\d+)*", text):
            return cls.from_exponents(text.split(","))
        b = 0
        for term in text.replace("⊕", "+").split("+"):
            if term == "1":
                e = 0
            elif term == "x":
                e = 1
            else:
                m = re.fullmatch(r"x\^\{?(\d+)\}?", term)
                if not m:
                    raise ValueError(f"cannot parse term {term!r}")
                e = int(m.group(1))
            b ^= 1 << e
        return cls(b)

    def exponents(self) -> list[int]:
        return [i for i in range(self.degree, -1, -1) if self.bits >> i & 1]

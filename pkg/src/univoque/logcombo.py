"""Exact linear combinations of logarithms of integers.

``LogCombo({3: 2, 2: Fraction(1, 2)})`` stands for ``2 log 3 + (1/2) log 2``.
Integers are factored over the small primes (any cofactor is kept whole),
so equal quantities get equal representations and dimension formulas can
be compared exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Union

Number = Union[int, Fraction]


def _small_primes(limit: int = 1000) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, int(limit ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i, v in enumerate(sieve) if v]


_PRIMES = _small_primes()


class LogCombo:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Number] = ()):
        clean = {}
        for base, c in dict(terms).items():
            if base < 1:
                raise ValueError("logarithm of a non-positive integer")
            c = Fraction(c)
            if base != 1 and c:
                clean[base] = clean.get(base, 0) + c
        self.terms = {b: c for b, c in clean.items() if c}

    @classmethod
    def of(cls, n: int, power: Number = 1) -> "LogCombo":
        """``power * log n``, with n factored over small primes."""
        if n < 1:
            raise ValueError("logarithm of a non-positive integer")
        if n < 2:
            return cls()
        factors = {}
        rest = n
        for p in _PRIMES:
            if rest % p == 0:
                e = 0
                while rest % p == 0:
                    rest //= p
                    e += 1
                factors[p] = e
        if rest > 1:
            factors[rest] = factors.get(rest, 0) + 1
        return cls({p: e * Fraction(power) for p, e in factors.items()})

    def __add__(self, other: "LogCombo") -> "LogCombo":
        terms = dict(self.terms)
        for b, c in other.terms.items():
            terms[b] = terms.get(b, 0) + c
        return LogCombo(terms)

    def __sub__(self, other: "LogCombo") -> "LogCombo":
        return self + other * -1

    def __mul__(self, k: Number) -> "LogCombo":
        return LogCombo({b: c * Fraction(k) for b, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, k: Number) -> "LogCombo":
        return self * (1 / Fraction(k))

    def __eq__(self, other):
        if not isinstance(other, LogCombo):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def value(self, base: float = math.e) -> float:
        return sum(float(c) * math.log(b) for b, c in self.terms.items()) / math.log(base)

    def __repr__(self):
        body = " + ".join(f"{c}*log({b})" for b, c in sorted(self.terms.items()))
        return f"LogCombo({body or '0'})"

"""Certified reals: rational enclosures ``[lo, hi]`` that can be refined on demand."""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional, Sequence, Tuple, Union

Rational = Union[int, Fraction]

DEFAULT_MAX_BITS = 4096


class PrecisionExhausted(ArithmeticError):
    """A decision could not be certified within the allowed bit budget."""


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def floor_dyadic(v: Fraction, bits: int) -> Fraction:
    return Fraction((v.numerator << bits) // v.denominator, 1 << bits)


def ceil_dyadic(v: Fraction, bits: int) -> Fraction:
    return Fraction(-((-v.numerator << bits) // v.denominator), 1 << bits)


class Quadratic:
    """Exact element ``a + b*sqrt(D)`` of a real quadratic field (D > 0, not a square)."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a: Rational, b: Rational, D: int):
        self.a = to_fraction(a)
        self.b = to_fraction(b)
        self.D = D

    def _lift(self, other) -> "Quadratic":
        if isinstance(other, Quadratic):
            if other.D != self.D:
                raise ValueError("mixing different quadratic fields")
            return other
        return Quadratic(to_fraction(other), 0, self.D)

    def __add__(self, other):
        o = self._lift(other)
        return Quadratic(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return Quadratic(-self.a, -self.b, self.D)

    def __sub__(self, other):
        o = self._lift(other)
        return Quadratic(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return Quadratic(self.a * o.a + self.D * self.b * o.b, self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        norm = o.a * o.a - self.D * o.b * o.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return self * Quadratic(o.a / norm, -o.b / norm, self.D)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def sign(self) -> int:
        # sign of a + b*sqrt(D), decided exactly
        sa, sb = (self.a > 0) - (self.a < 0), (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        cmp = self.a * self.a - self.D * self.b * self.b
        return sa if cmp > 0 else sb

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Quadratic)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __floor__(self) -> int:
        guess = math.floor(self.a + self.b * Fraction(isqrt(self.D)))
        for n in range(guess - abs(math.ceil(self.b)) - 2, guess + abs(math.ceil(self.b)) + 3):
            if self >= n and self < n + 1:
                return n
        raise ArithmeticError("floor search failed")

    def __ceil__(self) -> int:
        f = math.floor(self)
        return f if self == f else f + 1

    def enclosure(self, bits: int) -> Tuple[Fraction, Fraction]:
        scale = bits + 4 + max(0, math.ceil(math.log2(abs(float(self.b)) + 1)))
        r = isqrt(self.D << (2 * scale))
        lo_root, hi_root = Fraction(r, 1 << scale), Fraction(r + 1, 1 << scale)
        ends = (self.a + self.b * lo_root, self.a + self.b * hi_root)
        return min(ends), max(ends)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def __repr__(self):
        return f"Quadratic({self.a} + {self.b}*sqrt({self.D}))"


class Refiner:
    """Produces enclosures of a fixed real of width at most ``2**-bits``.

    Subclasses implement :meth:`compute`; the best enclosure seen so far is
    cached behind a lock so a refiner can be shared between threads.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._best: Optional[Tuple[Fraction, Fraction]] = None

    def compute(self, bits: int, hint: Optional[Tuple[Fraction, Fraction]]) -> Tuple[Fraction, Fraction]:
        raise NotImplementedError

    def __call__(self, bits: int) -> Tuple[Fraction, Fraction]:
        with self._lock:
            best = self._best
            if best is not None and best[1] - best[0] <= Fraction(1, 1 << bits):
                return best
            lo, hi = self.compute(bits, best)
            if best is not None:
                lo, hi = max(lo, best[0]), min(hi, best[1])
            self._best = (lo, hi)
            return lo, hi

    def __getstate__(self):
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()


class CertifiedReal:
    """A real number known to lie in ``[lo, hi]``.

    Instances are immutable; :meth:`refined` returns a narrower copy.  Results
    of arithmetic are plain enclosures without a refiner.
    """

    __slots__ = ("lo", "hi", "_refiner", "algebraic")

    def __init__(self, lo: Rational, hi: Optional[Rational] = None,
                 refiner: Optional[Callable[[int], Tuple[Fraction, Fraction]]] = None,
                 algebraic: Optional[Quadratic] = None):
        lo = to_fraction(lo)
        hi = lo if hi is None else to_fraction(hi)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self._refiner = refiner
        self.algebraic = algebraic

    @classmethod
    def exact(cls, value) -> "CertifiedReal":
        return cls(to_fraction(value))

    @classmethod
    def from_refiner(cls, refiner: Refiner, bits: int = 64,
                     algebraic: Optional[Quadratic] = None) -> "CertifiedReal":
        lo, hi = refiner(bits)
        return cls(lo, hi, refiner, algebraic)

    @property
    def exact_value(self):
        """A Fraction or Quadratic equal to this real, or None if only enclosed."""
        if self.is_exact:
            return self.lo
        return self.algebraic

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def refinable(self) -> bool:
        return self.is_exact or self._refiner is not None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refined(self, bits: int) -> "CertifiedReal":
        if self.width <= Fraction(1, 1 << bits):
            return self
        if self._refiner is None:
            raise PrecisionExhausted(f"enclosure of width {float(self.width):.3g} cannot be refined")
        lo, hi = self._refiner(bits)
        return CertifiedReal(max(lo, self.lo), min(hi, self.hi), self._refiner, self.algebraic)

    def try_refined(self, bits: int) -> "CertifiedReal":
        try:
            return self.refined(bits)
        except PrecisionExhausted:
            return self

    def __float__(self) -> float:
        return float(self.mid)

    def decimal(self, digits: int = 15) -> str:
        return f"{float(self.mid):.{digits}g}"

    def __repr__(self) -> str:
        if self.is_exact:
            return f"CertifiedReal({self.lo})"
        return f"CertifiedReal(~{self.decimal()} +/- {float(self.width) / 2:.2g})"

    def contains(self, value) -> bool:
        v = to_fraction(value)
        return self.lo <= v <= self.hi

    # -- interval arithmetic ------------------------------------------------

    @staticmethod
    def _lift(other) -> "CertifiedReal":
        return other if isinstance(other, CertifiedReal) else CertifiedReal.exact(other)

    def __add__(self, other):
        o = self._lift(other)
        return CertifiedReal(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return CertifiedReal(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._lift(other)
        return CertifiedReal(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return CertifiedReal(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("divisor enclosure contains 0")
        return self * CertifiedReal(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return 1 / (self ** -k)
        if self.lo >= 0:
            return CertifiedReal(self.lo ** k, self.hi ** k)
        if self.hi <= 0:
            a, b = (-self.hi) ** k, (-self.lo) ** k
            return CertifiedReal(a, b) if k % 2 == 0 else CertifiedReal(-b, -a)
        m = max(-self.lo, self.hi) ** k
        return CertifiedReal(0 if k % 2 == 0 else -m, m)

    # -- certified comparison ----------------------------------------------

    def certainly_lt(self, other) -> bool:
        return self.hi < self._lift(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= self._lift(other).lo


def rounded(value: CertifiedReal, bits: int) -> CertifiedReal:
    """Outward rounding of the enclosure to dyadic rationals with ``bits`` fraction bits."""
    return CertifiedReal(floor_dyadic(value.lo, bits), ceil_dyadic(value.hi, bits))


def decide(predicate: Callable[..., Optional[bool]], reals: Sequence[CertifiedReal],
           start_bits: int = 64, max_bits: int = DEFAULT_MAX_BITS) -> bool:
    """Evaluate a three-valued predicate on enclosures, refining until it commits.

    ``predicate`` returns True/False when the enclosures settle the question
    and None otherwise.
    """
    bits = start_bits
    current = list(reals)
    while True:
        verdict = predicate(*current)
        if verdict is not None:
            return verdict
        if bits >= max_bits:
            raise PrecisionExhausted(f"undecided at {max_bits} bits")
        bits = min(2 * bits, max_bits)
        current = [r.refined(bits) if not r.is_exact else r for r in current]


def compare(a: CertifiedReal, b: CertifiedReal, start_bits: int = 64,
            max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Certified sign of ``a - b``; equal exact values give 0."""
    def pred(u, v):
        if u.is_exact and v.is_exact:
            return (u.lo > v.lo) - (u.lo < v.lo)
        if u.hi < v.lo:
            return -1
        if u.lo > v.hi:
            return 1
        return None
    bits = start_bits
    a_, b_ = a, b
    while True:
        verdict = pred(a_, b_)
        if verdict is not None:
            return verdict
        if bits >= max_bits:
            raise PrecisionExhausted("comparison undecided")
        bits = min(2 * bits, max_bits)
        a_, b_ = a_.refined(bits), b_.refined(bits)


# -- algebraic constants ----------------------------------------------------

class QuadraticRefiner(Refiner):
    def __init__(self, value: Quadratic):
        super().__init__()
        self.value = value

    def compute(self, bits, hint):
        return self.value.enclosure(bits)


def affine_sqrt(a: Rational, b: Rational, D: int, c: Rational = 1, bits: int = 64) -> CertifiedReal:
    """Certified ``(a + b*sqrt(D)) / c``; exact whenever D is a perfect square."""
    a, b, c = to_fraction(a), to_fraction(b), to_fraction(c)
    root = isqrt(D)
    if root * root == D:
        return CertifiedReal.exact((a + b * root) / c)
    value = Quadratic(a / c, b / c, D)
    return CertifiedReal.from_refiner(QuadraticRefiner(value), bits, value)


def log_enclosure(value: CertifiedReal, base: float) -> Tuple[float, float]:
    """Float enclosure of ``log_base(value)``, widened by a few ulps."""
    if value.lo <= 0:
        raise ValueError("logarithm of a non-positive enclosure")
    lo = math.log(value.lo) / math.log(base)
    hi = math.log(value.hi) / math.log(base)
    return widen(lo, hi)


def widen(lo: float, hi: float, ulps: int = 4) -> Tuple[float, float]:
    for _ in range(ulps):
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
    return lo, hi


def from_floats(lo: float, hi: float) -> CertifiedReal:
    return CertifiedReal(Fraction(lo), Fraction(hi))

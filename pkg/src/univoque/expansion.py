"""Expansions of reals in a base q in (1, M+1] over the digits {0, ..., M}.

Digit choices are certified: when x or q is only known as an enclosure, both
are refined until every digit decision is strict, up to a bit budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .reals import (
    DEFAULT_MAX_BITS,
    CertifiedReal,
    PrecisionExhausted,
    Refiner,
    affine_sqrt,
    ceil_dyadic,
    floor_dyadic,
    to_fraction,
)
from .symbolic import Alphabet, PeriodicSeq, Word, shift, lex_compare, Ordering

RealLike = Union[CertifiedReal, Fraction, int, str]


def as_real(value: RealLike) -> CertifiedReal:
    return value if isinstance(value, CertifiedReal) else CertifiedReal.exact(to_fraction(value))


# -- evaluation -------------------------------------------------------------

def _poly_numerator(digits: bytes, a: int, b: int) -> int:
    # sum_i d_i * b^i * a^(L-i), i = 1..L
    acc = 0
    bp = 1
    for d in digits:
        bp *= b
        acc = acc * a + d * bp
    return acc


def seq_value_ratio(pre: bytes, per: bytes, a: int, b: int) -> tuple[int, int]:
    """Value of ``pre (per)^inf`` in base ``a/b`` as an unreduced (num, den) pair."""
    L, P = len(pre), len(per)
    aP, bP = a ** P, b ** P
    np_ = _poly_numerator(pre, a, b)
    nc = _poly_numerator(per, a, b)
    num = np_ * (aP - bP) + b ** L * nc
    den = a ** L * (aP - bP)
    return num, den


def seq_value_exact(s: PeriodicSeq, q: Fraction) -> Fraction:
    q = to_fraction(q)
    if q <= 1:
        raise ValueError("base must exceed 1")
    num, den = seq_value_ratio(s.preperiod, s.period, q.numerator, q.denominator)
    return Fraction(num, den)


def seq_value_float(s: PeriodicSeq, q: float) -> float:
    v = 0.0
    p = 1.0
    for d in s.preperiod:
        p /= q
        v += d * p
    per = 0.0
    pp = 1.0
    for d in s.period:
        pp /= q
        per += d * pp
    return v + p * per / (1.0 - pp)


def word_value(w: Union[Word, bytes], q: Fraction) -> Fraction:
    """``(w 0^inf)_q`` for an exact rational base."""
    digits = w.digits if isinstance(w, Word) else bytes(w)
    q = to_fraction(q)
    a, b = q.numerator, q.denominator
    return Fraction(_poly_numerator(digits, a, b), a ** len(digits))


class _EvalRefiner(Refiner):
    def __init__(self, s: PeriodicSeq, q: CertifiedReal):
        super().__init__()
        self.s = s
        self.q = q

    def compute(self, bits, hint):
        # |d/dq value| <= M / (q - 1)^2
        slope = self.s.M / (self.q.lo - 1) ** 2
        extra = max(0, math.ceil(math.log2(float(slope)))) + 2
        q = self.q.refined(bits + extra)
        return seq_value_exact(self.s, q.hi), seq_value_exact(self.s, q.lo)


def eval_seq(s: PeriodicSeq, q: RealLike) -> CertifiedReal:
    """Certified value of ``sum s_i q^-i``; decreasing in q since digits are nonnegative."""
    q = as_real(q)
    if q.lo <= 1:
        raise ValueError("base enclosure must lie strictly above 1")
    if q.is_exact:
        return CertifiedReal.exact(seq_value_exact(s, q.lo))
    lo, hi = seq_value_exact(s, q.hi), seq_value_exact(s, q.lo)
    return CertifiedReal(lo, hi, _EvalRefiner(s, q) if q.refinable else None)


# -- expansions -------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionPrefix:
    """The first ``n`` digits of an expansion, with a bound on the unseen tail.

    ``period`` is ``(start, length)`` when exact remainder tracking found the
    expansion to be eventually periodic.
    """

    digits: Word
    tail_lo: Fraction
    tail_hi: Fraction
    period: Optional[tuple[int, int]] = None

    def __len__(self):
        return len(self.digits)

    def __str__(self):
        return str(self.digits)

    def as_periodic(self) -> Optional[PeriodicSeq]:
        if self.period is None:
            return None
        start, length = self.period
        d = self.digits.digits
        return PeriodicSeq(d[:start], d[start:start + length], self.digits.alphabet)


GREEDY, QUASI, LAZY = "greedy", "quasi", "lazy"


def _digit(mode: str, tl: Fraction, th: Fraction, cap_lo: Fraction, cap_hi: Fraction, M: int):
    """Digit chosen by ``mode`` from the enclosure [tl, th] of q * remainder.

    ``cap_lo``/``cap_hi`` enclose M/(q-1).  Returns None if undecided.
    """
    if mode == GREEDY:
        a, b = min(M, math.floor(tl)), min(M, math.floor(th))
    elif mode == QUASI:
        if tl <= 0:
            return None
        a, b = min(M, math.ceil(tl) - 1), min(M, math.ceil(th) - 1)
    else:
        a, b = max(0, math.ceil(tl - cap_hi)), max(0, math.ceil(th - cap_lo))
    return a if a == b else None


def _exact_expand(mode, x, q, n: int, M: int):
    """Expansion with exact (rational or quadratic) x and q; never undecided."""
    cap = M / (q - 1)
    r = x
    digits = bytearray()
    seen: dict = {}
    period = None
    for k in range(n + 1):
        if period is None:
            if r in seen:
                period = (seen[r], k - seen[r])
            else:
                seen[r] = k
        if k == n:
            break
        t = q * r
        if mode == GREEDY:
            d = min(M, math.floor(t))
        elif mode == QUASI:
            d = min(M, math.ceil(t) - 1)
        else:
            d = max(0, math.ceil(t - cap))
        digits.append(d)
        r = t - d
    return bytes(digits), period


def _try_expand(mode, x: CertifiedReal, q: CertifiedReal, n: int, M: int, work_bits: int):
    exact = x.is_exact and q.is_exact
    ql, qh = q.lo, q.hi
    cap_lo, cap_hi = M / (qh - 1), M / (ql - 1)
    rl, rh = max(x.lo, Fraction(0)), x.hi
    digits = bytearray()
    seen: dict[Fraction, int] = {}
    period = None
    for k in range(n):
        if exact and period is None:
            if rl in seen:
                period = (seen[rl], k - seen[rl])
            else:
                seen[rl] = k
        tl, th = ql * rl, qh * rh
        d = _digit(mode, tl, th, cap_lo, cap_hi, M)
        if d is None:
            return None
        digits.append(d)
        rl, rh = max(tl - d, Fraction(0)), min(th - d, cap_hi)
        if rl > rh:
            return None
        if not exact:
            rl, rh = floor_dyadic(rl, work_bits), ceil_dyadic(rh, work_bits)
    if exact and period is None and rl in seen:
        period = (seen[rl], n - seen[rl])
    return bytes(digits), period


def _tail_bound(M: int, q_lo: Fraction, n: int) -> Fraction:
    # M q^-n / (q-1) at the lower end of the base, rounded up to a dyadic
    bits = 64 + int(n * math.log2(float(q_lo)))
    return ceil_dyadic(M * q_lo ** -n / (q_lo - 1), bits)


def _same_field(u, v) -> bool:
    du, dv = getattr(u, "D", None), getattr(v, "D", None)
    return du is None or dv is None or du == dv


def _expand(mode: str, x: RealLike, q: RealLike, n: int, M: int, max_bits: int) -> ExpansionPrefix:
    alphabet = Alphabet(M)
    x, q = as_real(x), as_real(q)
    if n < 1:
        raise ValueError("depth must be at least 1")
    if q.lo <= 1:
        raise ValueError("base must be certified > 1")
    if q.hi > M + 1:
        raise ValueError(f"base must not exceed M+1={M + 1}")
    if x.hi < 0 or x.lo > M / (q.lo - 1):
        raise ValueError("x lies outside [0, M/(q-1)]")
    if mode == QUASI and x.hi <= 0:
        raise ValueError("quasi-greedy expansion requires x > 0")
    xe, qe = x.exact_value, q.exact_value
    if xe is not None and qe is not None and _same_field(xe, qe):
        digits, period = _exact_expand(mode, xe, qe, n, M)
        tail_hi = _tail_bound(M, q.lo, n)
        return ExpansionPrefix(Word(digits, alphabet), Fraction(0), tail_hi, period)
    log_q = math.log2(float(q.hi))
    bits = max(64, int(n * log_q) + 32)
    while True:
        xs = x if x.is_exact else x.refined(bits)
        qs = q if q.is_exact else q.refined(bits)
        result = _try_expand(mode, xs, qs, n, M, bits + int(n * log_q) + 16)
        if result is not None:
            digits, period = result
            tail_hi = _tail_bound(M, qs.lo, n)
            return ExpansionPrefix(Word(digits, alphabet), Fraction(0), tail_hi, period)
        if xs.is_exact and qs.is_exact:
            raise ArithmeticError("exact expansion failed; inconsistent input")
        if bits >= max_bits:
            raise PrecisionExhausted(f"digit undecided within {max_bits} bits")
        bits = min(2 * bits, max_bits)


def greedy_expand(x: RealLike, q: RealLike, n: int, M: int = 1, *,
                  max_bits: int = DEFAULT_MAX_BITS) -> ExpansionPrefix:
    """Lexicographically largest expansion: d_k = max{d : (d_1..d_{k-1} d 0^inf)_q <= x}."""
    return _expand(GREEDY, x, q, n, M, max_bits)


def quasi_greedy_expand(x: RealLike, q: RealLike, n: int, M: int = 1, *,
                        max_bits: int = DEFAULT_MAX_BITS) -> ExpansionPrefix:
    """Largest expansion not ending in 0^inf: the strict version of the greedy rule."""
    return _expand(QUASI, x, q, n, M, max_bits)


def lazy_expand(x: RealLike, q: RealLike, n: int, M: int = 1, *,
                max_bits: int = DEFAULT_MAX_BITS) -> ExpansionPrefix:
    """Lexicographically smallest expansion.

    Runs the greedy recursion on the reflected point M/(q-1) - x directly:
    the digit is the least d keeping the remainder within M/(q-1).
    """
    return _expand(LAZY, x, q, n, M, max_bits)


def alpha(q: RealLike, n: int, M: int = 1, *, max_bits: int = DEFAULT_MAX_BITS) -> ExpansionPrefix:
    """Quasi-greedy expansion of 1 in base q."""
    return quasi_greedy_expand(1, q, n, M, max_bits=max_bits)


def is_valid_alpha(s: PeriodicSeq) -> bool:
    """True iff every tail of s is strictly above 0^inf and not above s itself."""
    zero = PeriodicSeq.constant(0, s.alphabet)
    for k in range(len(s.preperiod) + len(s.period)):
        tail = shift(s, k)
        if lex_compare(tail, zero) is not Ordering.GT:
            return False
        if lex_compare(tail, s) is Ordering.GT:
            return False
    return True


class Univoque(Enum):
    UNIQUE_CERTIFIED = "unique"
    NOT_UNIQUE = "not_unique"
    UNDECIDED_AT_DEPTH = "undecided"


def is_univoque_point(x: RealLike, q: RealLike, n: int, M: int = 1, *,
                      max_bits: int = DEFAULT_MAX_BITS) -> Univoque:
    """Compare greedy and lazy expansions of x in base q up to depth n."""
    g = greedy_expand(x, q, n, M, max_bits=max_bits)
    z = lazy_expand(x, q, n, M, max_bits=max_bits)
    if g.digits != z.digits:
        return Univoque.NOT_UNIQUE
    gs, zs = g.as_periodic(), z.as_periodic()
    if gs is not None and zs is not None and gs == zs:
        return Univoque.UNIQUE_CERTIFIED
    return Univoque.UNDECIDED_AT_DEPTH


# -- constants ----------------------------------------------------------------

def q_G(M: Union[int, Alphabet]) -> CertifiedReal:
    """Generalized golden ratio: k+1 for M=2k, (k+1+sqrt(k^2+6k+5))/2 for M=2k+1."""
    M = M.M if isinstance(M, Alphabet) else M
    if M < 1:
        raise ValueError("M must be positive")
    k, odd = divmod(M, 2)
    if not odd:
        return CertifiedReal.exact(k + 1)
    return affine_sqrt(k + 1, 1, k * k + 6 * k + 5, 2)


@dataclass(frozen=True)
class FiniteExpansion:
    """Base-(M+1) data of x in (0, 1].

    ``word`` is the terminating expansion (None when x is not in D_M);
    ``quasi_greedy`` is Phi_x(M+1); ``m`` is the length of the part before
    the M^inf tail when x is in D_M, 0 for x = 1 and None otherwise.
    """

    x: Fraction
    word: Optional[Word]
    quasi_greedy: PeriodicSeq
    m: Optional[int]

    @property
    def eps(self) -> Word:
        """The digits eps_1..eps_m preceding M^inf."""
        if self.m is None:
            raise ValueError(f"{self.x} has no finite base-(M+1) expansion")
        return self.quasi_greedy.prefix(self.m)


def finite_base_M1_expansion(x: RealLike, M: int) -> FiniteExpansion:
    x = to_fraction(x.lo if isinstance(x, CertifiedReal) else x)
    if not 0 < x <= 1:
        raise ValueError("x must lie in (0, 1]")
    alphabet = Alphabet(M)
    base = M + 1
    if x == 1:
        return FiniteExpansion(x, None, PeriodicSeq.constant(M, alphabet), 0)
    den = x.denominator
    n = 0
    while den % base == 0:
        den //= base
        n += 1
    # x is in D_M iff its reduced denominator divides a power of M+1
    g = math.gcd(den, base)
    while g > 1:
        while den % g == 0:
            den //= g
        g = math.gcd(den, base)
    if den != 1:
        qg = quasi_greedy_expand(x, base, 4 * x.denominator + 8, M)
        seq = qg.as_periodic()
        assert seq is not None
        return FiniteExpansion(x, None, seq, None)
    digits = []
    r = x
    while r:
        r *= base
        d = math.floor(r)
        digits.append(d)
        r -= d
    word = Word(digits, alphabet)
    quasi = PeriodicSeq(digits[:-1] + [digits[-1] - 1], [M], alphabet)
    return FiniteExpansion(x, word, quasi, len(digits))

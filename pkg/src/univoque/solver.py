"""Inverse problems: the base q in which a given sequence expands x.

For a nonzero digit sequence s the value ``(s)_q`` is strictly decreasing in
q, so the base solving ``(s)_q = x`` is found by bisection with exact
rational midpoints.  Results are certified enclosures that can be refined
further on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Tuple

from .expansion import (
    q_G,
    quasi_greedy_expand,
    seq_value_float,
    seq_value_ratio,
    word_value,
)
from .reals import DEFAULT_MAX_BITS, CertifiedReal, PrecisionExhausted, Refiner, to_fraction
from .symbolic import PeriodicSeq, Word, trailing_run

DEFAULT_TOL = Fraction(1, 1 << 60)
MIN_BASE = 1 + Fraction(1, 1 << 20)


class BracketError(ValueError):
    """The bracket does not straddle the requested value."""


class RoundtripError(ValueError):
    def __init__(self, message: str, prefix: Word):
        super().__init__(message)
        self.prefix = prefix


def _bits_for(tol: Fraction) -> int:
    tol = to_fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return max(1, math.ceil(math.log2(1 / tol)) + (0 if (1 / tol).denominator == 1 else 1))


def _bisect(above_root: Callable[[Fraction], Optional[bool]], lo: Fraction, hi: Fraction,
            bits: int, max_bits: int = DEFAULT_MAX_BITS) -> Tuple[Fraction, Fraction]:
    """Shrink [lo, hi] to width <= 2^-bits keeping the root inside.

    ``above_root(q)`` is False for q left of the root, True right of it, and
    None when q is the root itself.
    """
    if bits > max_bits:
        raise PrecisionExhausted(f"tolerance 2^-{bits} exceeds the budget of {max_bits} bits")
    width = Fraction(1, 1 << bits)
    while hi - lo > width:
        mid = (lo + hi) / 2
        side = above_root(mid)
        if side is None:
            return mid, mid
        if side:
            hi = mid
        else:
            lo = mid
    return lo, hi


class _SeqPredicate:
    """Picklable ``q -> sign((s)_q - x)`` test on exact rationals."""

    def __init__(self, s: PeriodicSeq, x: Fraction):
        self.s, self.x = s, x

    def __call__(self, q: Fraction) -> Optional[bool]:
        num, den = seq_value_ratio(self.s.preperiod, self.s.period, q.numerator, q.denominator)
        lhs, rhs = num * self.x.denominator, self.x.numerator * den
        if lhs == rhs:
            return None
        return lhs < rhs


class BisectionRefiner(Refiner):
    def __init__(self, s: PeriodicSeq, x: Fraction, lo: Fraction, hi: Fraction,
                 max_bits: int = DEFAULT_MAX_BITS):
        super().__init__()
        self.pred = _SeqPredicate(s, x)
        self.s, self.x = s, x
        self.lo, self.hi = lo, hi
        self.max_bits = max_bits

    def _prebracket(self) -> Tuple[Fraction, Fraction]:
        # float bisection first; accepted only if the exact test confirms it
        flo, fhi = float(self.lo), float(self.hi)
        xf = float(self.x)
        try:
            for _ in range(80):
                mid = (flo + fhi) / 2
                if seq_value_float(self.s, mid) > xf:
                    flo = mid
                else:
                    fhi = mid
        except (OverflowError, ZeroDivisionError):
            return self.lo, self.hi
        r = Fraction((flo + fhi) / 2)
        for k in (40, 30, 20):
            a, b = r - Fraction(1, 1 << k), r + Fraction(1, 1 << k)
            if a < self.lo or b > self.hi:
                continue
            if self.pred(a) is False and self.pred(b) is True:
                return a, b
        return self.lo, self.hi

    def compute(self, bits, hint):
        lo, hi = hint if hint is not None else self._prebracket()
        return _bisect(self.pred, lo, hi, bits, self.max_bits)


def default_bracket(M: int) -> Tuple[Fraction, Fraction]:
    return max(MIN_BASE, q_G(M).lo), Fraction(M + 1)


def solve_base(s: PeriodicSeq, x, bracket: Optional[Tuple] = None, tol=DEFAULT_TOL, *,
               max_bits: int = DEFAULT_MAX_BITS) -> CertifiedReal:
    """Certified enclosure of width <= tol of the q with ``(s)_q = x``."""
    x = to_fraction(x)
    if not s.preperiod.strip(b"\x00") and not s.period.strip(b"\x00"):
        raise ValueError("the zero sequence has no base")
    lo, hi = (default_bracket(s.M) if bracket is None
              else (to_fraction(bracket[0]), to_fraction(bracket[1])))
    if lo <= 1 or lo > hi:
        raise ValueError("bracket must satisfy 1 < lo <= hi")
    pred = _SeqPredicate(s, x)
    at_lo, at_hi = pred(lo), pred(hi)
    if at_lo is None:
        return CertifiedReal.exact(lo)
    if at_hi is None:
        return CertifiedReal.exact(hi)
    if at_lo or not at_hi:
        raise BracketError(f"({s})_q = {x} has no root in [{float(lo):.6g}, {float(hi):.6g}]")
    refiner = BisectionRefiner(s, x, lo, hi, max_bits)
    return CertifiedReal.from_refiner(refiner, _bits_for(tol))


def phi_inverse(s: PeriodicSeq, x, tol=DEFAULT_TOL, depth: Optional[int] = None, *,
                max_bits: int = DEFAULT_MAX_BITS) -> CertifiedReal:
    """The base q whose quasi-greedy expansion of x is s, checked by roundtrip.

    The quasi-greedy map is left-continuous in q, so the check expands x in
    the exact rational base ``q.lo`` and refines q until the prefixes agree.
    """
    x = to_fraction(x)
    n = depth if depth is not None else 2 * (len(s.preperiod) + len(s.period)) + 16
    q = solve_base(s, x, (MIN_BASE, s.M + 1), tol, max_bits=max_bits)
    target = s.prefix(n)
    bits = _bits_for(tol)
    while True:
        got = quasi_greedy_expand(x, q.lo, n, s.M).digits if q.lo > 1 else None
        if got == target:
            return q
        if q.is_exact or bits >= max_bits:
            raise RoundtripError(f"{s} is not the quasi-greedy expansion of {x} in any base",
                                 got if got is not None else target)
        bits = min(2 * bits, max_bits)
        q = q.refined(bits)


# -- Komornik-Loreti ----------------------------------------------------------

def thue_morse_shifted(n: int) -> bytes:
    """tau_1..tau_n with tau_i the parity of the binary digit sum of i."""
    return bytes(bin(i).count("1") & 1 for i in range(1, n + 1))


class _KLRefiner(Refiner):
    def compute(self, bits, hint):
        lo, hi = hint if hint is not None else (Fraction(17, 10), Fraction(19, 10))
        # tail sum_{i>K} tau_i q^-i lies in [0, q^-K/(q-1)]
        K = math.ceil((bits + 8) / math.log2(float(lo))) + 8
        digits = thue_morse_shifted(K)

        def trunc_above(q):
            # the truncated sum underestimates, so its root is left of q_KL
            v = word_value(digits, q)
            return None if v == 1 else v < 1

        def padded_above(q):
            v = word_value(digits, q) + q ** -K / (q - 1)
            return None if v == 1 else v < 1

        a, _ = _bisect(trunc_above, lo, hi, bits + 1)
        _, b = _bisect(padded_above, lo, hi, bits + 1)
        return a, b


def komornik_loreti(tol=Fraction(1, 10 ** 5)) -> CertifiedReal:
    """The smallest univoque base of 1 for M = 1."""
    tol = to_fraction(tol)
    q = CertifiedReal.from_refiner(_KLRefiner(), _bits_for(tol))
    if q.width > tol:
        q = q.refined(_bits_for(tol) + 2)
    return q


# -- symbolic interval endpoints --------------------------------------------

@dataclass(frozen=True)
class Endpoints:
    left_seq: PeriodicSeq
    right_seq: PeriodicSeq
    left: CertifiedReal
    right: CertifiedReal


def check_admissible(omega: Word, prefix_len: int, N: int) -> None:
    d = omega.digits[prefix_len:]
    M = omega.M
    if bytes(N) in d or bytes([M]) * N in d:
        raise ValueError(f"{omega} contains a forbidden run of length {N}")


def endpoint_sequences(omega: Word, prefix_len: int, N: int) -> Tuple[PeriodicSeq, PeriodicSeq]:
    """Smallest and largest sequences of the run-constrained set starting with omega."""
    if N < 2:
        raise ValueError("run bound N must be at least 2")
    check_admissible(omega, prefix_len, N)
    M = omega.M
    w = omega.digits
    d = w[prefix_len:]
    left = PeriodicSeq(w, bytes(N - 1) + b"\x01", M)
    right = PeriodicSeq(w, bytes([M]) * (N - 1) + bytes([M - 1]), M)
    if d and d[-1] == 0:
        k = trailing_run(d, 0)
        left = PeriodicSeq(w + bytes(N - 1 - k), b"\x01" + bytes(N - 1), M)
    elif d and d[-1] == M:
        k = trailing_run(d, M)
        right = PeriodicSeq(w + bytes([M]) * (N - 1 - k), bytes([M - 1]) + bytes([M]) * (N - 1), M)
    return left, right


@lru_cache(maxsize=1 << 16)
def _solve_cached(s: PeriodicSeq, x: Fraction, bits: int) -> CertifiedReal:
    return solve_base(s, x, tol=Fraction(1, 1 << bits))


def interval_endpoints(omega: Word, x, N: int, tol=DEFAULT_TOL,
                       prefix_len: Optional[int] = None) -> Endpoints:
    """Basic interval I_omega of the run-constrained univoque set of x.

    ``prefix_len`` defaults to m + N, the length of the fixed prefix eps M^N
    for x with a finite base-(M+1) expansion of length m.
    """
    from .expansion import finite_base_M1_expansion

    x = to_fraction(x)
    if prefix_len is None:
        fe = finite_base_M1_expansion(x, omega.M)
        if not fe.m:
            raise ValueError(f"{x} has no finite base-{omega.M + 1} expansion")
        prefix_len = fe.m + N
    ls, rs = endpoint_sequences(omega, prefix_len, N)
    bits = _bits_for(tol)
    return Endpoints(ls, rs, _solve_cached(ls, x, bits), _solve_cached(rs, x, bits))

"""Finite words and eventually periodic sequences over the alphabet {0, ..., M}.

Every infinite sequence this package manipulates exactly is of the form
``pre (per)^inf``.  :class:`PeriodicSeq` keeps that pair in a canonical form
(primitive period, shortest preperiod), so structural equality coincides
with equality of the infinite sequences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import total_ordering
from math import lcm
from typing import Iterable, Sequence, Union

MAX_M = 254


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    M: int

    def __post_init__(self):
        if not isinstance(self.M, int) or self.M < 1:
            raise ValueError(f"alphabet size parameter M must be a positive integer, got {self.M!r}")
        if self.M > MAX_M:
            raise ValueError(f"M={self.M} exceeds the supported maximum {MAX_M}")

    @property
    def size(self) -> int:
        return self.M + 1

    def check(self, digits: bytes) -> None:
        for d in digits:
            if d > self.M:
                raise ValueError(f"digit {d} outside alphabet {{0..{self.M}}}")


def _as_alphabet(M: Union[int, Alphabet]) -> Alphabet:
    return M if isinstance(M, Alphabet) else Alphabet(M)


DigitsLike = Union[bytes, bytearray, Sequence[int], "Word"]


def _to_bytes(digits: DigitsLike) -> bytes:
    if isinstance(digits, Word):
        return digits.digits
    if isinstance(digits, (bytes, bytearray)):
        return bytes(digits)
    return bytes(int(d) for d in digits)


@dataclass(frozen=True)
class Word:
    """A finite digit string; digits are stored as a ``bytes`` object."""

    digits: bytes
    alphabet: Alphabet

    def __init__(self, digits: DigitsLike, M: Union[int, Alphabet]):
        alphabet = _as_alphabet(M)
        raw = _to_bytes(digits)
        alphabet.check(raw)
        object.__setattr__(self, "digits", raw)
        object.__setattr__(self, "alphabet", alphabet)

    @property
    def M(self) -> int:
        return self.alphabet.M

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.digits[item], self.alphabet)
        return self.digits[item]

    def __add__(self, other: DigitsLike) -> "Word":
        if isinstance(other, Word) and other.alphabet != self.alphabet:
            raise AlphabetMismatch("cannot concatenate words over different alphabets")
        return Word(self.digits + _to_bytes(other), self.alphabet)

    def __mul__(self, k: int) -> "Word":
        return Word(self.digits * k, self.alphabet)

    def __str__(self) -> str:
        return format_digits(self.digits, self.M)

    def __repr__(self) -> str:
        return f"Word({str(self)!r}, M={self.M})"

    def count(self, b: int) -> int:
        return digit_count(self, b)

    def successor(self) -> "Word | None":
        """``c_1 ... c_{k-1} (c_k + 1)``, or None if the last digit is already M."""
        if not self.digits or self.digits[-1] == self.M:
            return None
        return Word(self.digits[:-1] + bytes([self.digits[-1] + 1]), self.alphabet)


def _primitive_root_length(per: bytes) -> int:
    # prefix function; the period is primitive iff n % (n - pi[-1]) != 0
    n = len(per)
    pi = [0] * n
    k = 0
    for i in range(1, n):
        while k and per[i] != per[k]:
            k = pi[k - 1]
        if per[i] == per[k]:
            k += 1
        pi[i] = k
    p = n - pi[-1]
    return p if n % p == 0 else n


@total_ordering
@dataclass(frozen=True)
class PeriodicSeq:
    """The infinite sequence ``preperiod (period)^inf`` in canonical form."""

    preperiod: bytes
    period: bytes
    alphabet: Alphabet

    def __init__(self, preperiod: DigitsLike, period: DigitsLike, M: Union[int, Alphabet]):
        alphabet = _as_alphabet(M)
        pre = _to_bytes(preperiod)
        per = _to_bytes(period)
        if not per:
            raise ValueError("period must be nonempty")
        alphabet.check(pre)
        alphabet.check(per)
        per = per[: _primitive_root_length(per)]
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)
        object.__setattr__(self, "alphabet", alphabet)

    @classmethod
    def constant(cls, d: int, M: Union[int, Alphabet]) -> "PeriodicSeq":
        return cls(b"", bytes([d]), M)

    @property
    def M(self) -> int:
        return self.alphabet.M

    def digit(self, i: int) -> int:
        """The digit at 0-based position ``i``."""
        L = len(self.preperiod)
        if i < L:
            return self.preperiod[i]
        return self.period[(i - L) % len(self.period)]

    def prefix(self, n: int) -> Word:
        L = len(self.preperiod)
        if n <= L:
            return Word(self.preperiod[:n], self.alphabet)
        reps = -(-(n - L) // len(self.period))
        return Word((self.preperiod + self.period * reps)[:n], self.alphabet)

    def decision_length(self, other: "PeriodicSeq") -> int:
        return (len(self.preperiod) + len(other.preperiod)
                + lcm(len(self.period), len(other.period)))

    def first_difference(self, other: "PeriodicSeq") -> int | None:
        """0-based index of the first disagreement, or None if equal."""
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch("sequences over different alphabets")
        for i in range(self.decision_length(other)):
            if self.digit(i) != other.digit(i):
                return i
        return None

    def __lt__(self, other: "PeriodicSeq") -> bool:
        return lex_compare(self, other) is Ordering.LT

    def __str__(self) -> str:
        return format_seq(self)

    def __repr__(self) -> str:
        return f"PeriodicSeq({str(self)!r}, M={self.M})"


def lex_compare(s: PeriodicSeq, t: PeriodicSeq) -> Ordering:
    i = s.first_difference(t)
    if i is None:
        return Ordering.EQ
    return Ordering.LT if s.digit(i) < t.digit(i) else Ordering.GT


def rho_distance(s: PeriodicSeq, t: PeriodicSeq) -> Fraction:
    i = s.first_difference(t)
    if i is None:
        return Fraction(0)
    return Fraction(1, (s.M + 1) ** (i + 1))


def shift(s: PeriodicSeq, n: int) -> PeriodicSeq:
    if n < 0:
        raise ValueError("shift amount must be nonnegative")
    L = len(s.preperiod)
    if n <= L:
        return PeriodicSeq(s.preperiod[n:], s.period, s.alphabet)
    r = (n - L) % len(s.period)
    return PeriodicSeq(b"", s.period[r:] + s.period[:r], s.alphabet)


def _reflect_bytes(digits: bytes, M: int) -> bytes:
    return bytes(M - d for d in digits)


def reflect(s: Union[PeriodicSeq, Word]):
    """Digitwise complement d -> M - d."""
    if isinstance(s, Word):
        return Word(_reflect_bytes(s.digits, s.M), s.alphabet)
    return PeriodicSeq(_reflect_bytes(s.preperiod, s.M), _reflect_bytes(s.period, s.M), s.alphabet)


def digit_count(w: Union[Word, bytes], b: int) -> int:
    return (w.digits if isinstance(w, Word) else bytes(w)).count(b)


def max_run(w: Union[Word, bytes], b: int) -> int:
    best = cur = 0
    for d in (w.digits if isinstance(w, Word) else w):
        if d == b:
            cur += 1
            if cur > best:
                best = cur
        else:
            cur = 0
    return best


def trailing_run(w: Union[Word, bytes], b: int) -> int:
    digits = w.digits if isinstance(w, Word) else w
    k = 0
    for d in reversed(digits):
        if d != b:
            break
        k += 1
    return k


# -- text form -------------------------------------------------------------

def format_digits(digits: Iterable[int], M: int) -> str:
    if M <= 9:
        return "".join(str(d) for d in digits)
    return ",".join(str(d) for d in digits)


def format_seq(s: PeriodicSeq) -> str:
    pre = format_digits(s.preperiod, s.M)
    per = format_digits(s.period, s.M)
    if s.M > 9 and pre:
        return f"{pre},({per})"
    return f"{pre}({per})"


def _parse_digit_list(text: str, M: int) -> list[int]:
    text = text.strip().strip(",")
    if not text:
        return []
    if "," in text or M > 9:
        return [int(t) for t in text.split(",") if t.strip()]
    return [int(ch) for ch in text]


_SEQ_RE = re.compile(r"^\s*([0-9,\s]*)\(([0-9,\s]+)\)\s*$")


def parse_seq(text: str, M: int) -> PeriodicSeq:
    """Parse ``"01(10)"`` as 01(10)^inf; with M > 9 digits are comma separated."""
    match = _SEQ_RE.match(text)
    if not match:
        raise ValueError(f"malformed sequence {text!r}; expected 'pre(period)'")
    pre = _parse_digit_list(match.group(1), M)
    per = _parse_digit_list(match.group(2), M)
    return PeriodicSeq(pre, per, M)


def parse_word(text: str, M: int) -> Word:
    return Word(_parse_digit_list(text, M), M)

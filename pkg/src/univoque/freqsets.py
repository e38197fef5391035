"""Block constructions inside the run-constrained univoque sets.

Two families of blocks are concatenated after the fixed prefix eps M^N:

* simply normal blocks D_k of length m_k = 2^k (M+1) floor(N/3), whose digit
  counts are as balanced as possible, so every digit has frequency 1/(M+1);
* irregular blocks Delta_k, a free part followed by long constant-ish
  segments, which make every digit frequency oscillate.

Counts are exact big integers; samplers are exactly uniform and seeded.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .cantor import setup_for
from .logcombo import LogCombo
from .reals import CertifiedReal, to_fraction
from .solver import solve_base
from .symbolic import PeriodicSeq, Word, digit_count

Vector = Tuple[int, ...]


# -- simply normal blocks -----------------------------------------------------

def block_length_mk(k: int, M: int, N: int) -> int:
    if N <= 6 * M:
        raise ValueError(f"run bound N={N} must exceed 6M={6 * M}")
    return (1 << k) * (M + 1) * (N // 3)


def sn_run_bound(j: int, M: int) -> int:
    """Run bound used for the simply normal family: 6M * 2^j (always > 6M)."""
    return 6 * M * (1 << j)


@dataclass(frozen=True)
class FreqVector:
    counts: Vector
    m: int

    def __post_init__(self):
        M = len(self.counts) - 1
        if sum(self.counts) != self.m:
            raise ValueError("digit counts must add up to the block length")
        if self.m % (M + 1):
            raise ValueError(f"M+1={M + 1} must divide m={self.m}")
        base = self.m // (M + 1)
        if any(c not in (base, base - 1) for c in self.counts[:-1]):
            raise ValueError(f"counts {self.counts} outside {{{base - 1}, {base}}}")
        for c in self.counts:
            assert abs(Fraction(c, self.m) - Fraction(1, M + 1)) <= Fraction(M, self.m)

    @property
    def M(self) -> int:
        return len(self.counts) - 1

    @property
    def last_offset(self) -> int:
        """How far the last count sits above m/(M+1); always in [0, M]."""
        return self.counts[-1] - self.m // (self.M + 1)


def freq_vectors(M: int, m: int) -> List[FreqVector]:
    if m % (M + 1):
        raise ValueError(f"M+1={M + 1} must divide m={m}")
    base = m // (M + 1)
    out = []
    for head in itertools.product((base, base - 1), repeat=M):
        out.append(FreqVector(tuple(head) + (m - sum(head),), m))
    return out


def count_D(v: FreqVector) -> int:
    """Multinomial coefficient m! / prod n_b!."""
    total, rest = 1, v.m
    for c in v.counts:
        total *= math.comb(rest, c)
        rest -= c
    return total


@lru_cache(maxsize=256)
def _vector_distribution(k: int, M: int, N: int) -> Dict[Vector, int]:
    """For each count vector, the number of members of D_k with those counts."""
    m = block_length_mk(k, M, N)
    if k == 0:
        return {v.counts: count_D(v) for v in freq_vectors(M, m)}
    prev = _vector_distribution(k - 1, M, N)
    out = {}
    for v in freq_vectors(M, m):
        total = 0
        for a, ca in prev.items():
            b = tuple(x - y for x, y in zip(v.counts, a))
            cb = prev.get(b)
            if cb:
                total += ca * cb
        out[v.counts] = total
    return out


def count_Djk(k: int, M: int, N: int) -> int:
    return sum(_vector_distribution(k, M, N).values())


def lower_bound_Djk(k: int, M: int, N: int) -> int:
    m0 = block_length_mk(0, M, N)
    return (1 << M) * min(count_D(v) for v in freq_vectors(M, m0)) ** (1 << k)


def _words_with_counts(counts: Vector):
    # lexicographic enumeration of a multiset's permutations
    n = sum(counts)
    if n == 0:
        yield b""
        return
    for b, c in enumerate(counts):
        if c:
            rest = counts[:b] + (c - 1,) + counts[b + 1:]
            for tail in _words_with_counts(rest):
                yield bytes([b]) + tail


@dataclass(frozen=True)
class DjkResult:
    k: int
    words: Optional[List[bytes]]
    exact_count: int
    lower_bound: int


def build_or_count_Djk(k: int, M: int, N: int, cap: int = 10 ** 7) -> DjkResult:
    """Enumerate D_k when the candidate pairs stay under ``cap``; always count exactly."""
    exact = count_Djk(k, M, N)
    bound = lower_bound_Djk(k, M, N)
    words = None
    if k == 0:
        if exact <= cap:
            m0 = block_length_mk(0, M, N)
            words = sorted(w for v in freq_vectors(M, m0) for w in _words_with_counts(v.counts))
    else:
        prev = build_or_count_Djk(k - 1, M, N, cap)
        if prev.words is not None and len(prev.words) ** 2 <= cap:
            allowed = {v.counts for v in freq_vectors(M, block_length_mk(k, M, N))}
            words = [u + v for u in prev.words for v in prev.words
                     if tuple((u + v).count(b) for b in range(M + 1)) in allowed]
    return DjkResult(k, words, exact, bound)


def _weighted_choice(rng: random.Random, items: Sequence, weights: Sequence[int]):
    r = rng.randrange(sum(weights))
    for item, w in zip(items, weights):
        if r < w:
            return item
        r -= w
    raise AssertionError("unreachable")


def _sample_with_counts(rng: random.Random, counts: Vector, k: int, M: int, N: int) -> bytes:
    if k == 0:
        digits = [b for b, c in enumerate(counts) for _ in range(c)]
        rng.shuffle(digits)
        return bytes(digits)
    prev = _vector_distribution(k - 1, M, N)
    splits, weights = [], []
    for a, ca in prev.items():
        b = tuple(x - y for x, y in zip(counts, a))
        cb = prev.get(b)
        if cb:
            splits.append((a, b))
            weights.append(ca * cb)
    a, b = _weighted_choice(rng, splits, weights)
    return (_sample_with_counts(rng, a, k - 1, M, N)
            + _sample_with_counts(rng, b, k - 1, M, N))


def sample_Djk(rng: random.Random, k: int, M: int, N: int) -> bytes:
    """A uniformly random member of D_k."""
    dist = _vector_distribution(k, M, N)
    vecs = sorted(dist)
    v = _weighted_choice(rng, vecs, [dist[x] for x in vecs])
    return _sample_with_counts(rng, v, k, M, N)


def sn_block_ends(M: int, N: int, count: int) -> List[int]:
    """Cumulative lengths m_0, m_0+m_1, ... of the first ``count`` blocks."""
    ends, total = [], 0
    for k in range(count):
        total += block_length_mk(k, M, N)
        ends.append(total)
    return ends


def sample_simply_normal(x, j: Optional[int], depth: int, seed: int, M: int = 1,
                         N: Optional[int] = None) -> Word:
    """Prefix eps M^N followed by uniform blocks d_0 d_1 ... until the length reaches depth."""
    if N is None:
        N = sn_run_bound(j, M)
    setup = setup_for(x, None, M, N)
    rng = random.Random(seed)
    out = bytearray(setup.prefix.digits)
    k = 0
    while len(out) < depth:
        out += sample_Djk(rng, k, M, N)
        k += 1
    return Word(bytes(out), M)


# -- irregular blocks ---------------------------------------------------------

@dataclass(frozen=True)
class DeltaBlock:
    """Template of the irregular blocks of index k.

    ``choices[i]`` lists the digits allowed at free position i; for M = 1
    the pairs at positions N n - 1, N n are fixed to 01 and appear with a
    single choice.
    """

    k: int
    M: int
    N: int
    choices: Tuple[Tuple[int, ...], ...]
    tail: bytes

    @property
    def free_len(self) -> int:
        return len(self.choices)

    @property
    def length(self) -> int:
        return self.free_len + len(self.tail)

    @property
    def count(self) -> int:
        """Closed-form number of blocks."""
        k, M, N = self.k, self.M, self.N
        if M == 1:
            return 2 ** ((1 << (k + 1)) * N * (N - 2))
        return (M + 1) ** ((1 << k) * (M + 1) * N * (N - 1)) * (M - 1) ** ((1 << k) * (M + 1) * N)

    def recount(self) -> int:
        """Independent count: product of the number of choices per position."""
        total = 1
        for c in self.choices:
            total *= len(c)
        return total

    def log_count(self) -> LogCombo:
        acc = LogCombo()
        for size, reps in _histogram(len(c) for c in self.choices).items():
            acc = acc + LogCombo.of(size, reps)
        return acc

    def sample(self, rng: random.Random) -> bytes:
        return bytes(rng.choice(c) for c in self.choices) + self.tail


def _histogram(values) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for v in values:
        out[v] = out.get(v, 0) + 1
    return out


def build_Delta_jk(k: int, M: int, N: int) -> DeltaBlock:
    if N < 3:
        raise ValueError("run bound N must be at least 3")
    reps = 1 << k
    if M == 1:
        free = (1 << (k + 1)) * N * N
        choices = []
        for i in range(1, free + 1):
            if i % N == 0:
                choices.append((1,))
            elif (i + 1) % N == 0:
                choices.append((0,))
            else:
                choices.append((0, 1))
        tail = (bytes(N - 1) + b"\x01") * reps + (b"\x00" + b"\x01" * (N - 1)) * reps + b"\x00\x01"
        return DeltaBlock(k, M, N, tuple(choices), tail)
    if M < 1:
        raise ValueError("M must be positive")
    free = reps * (M + 1) * N * N
    inner = tuple(range(1, M))
    full = tuple(range(M + 1))
    choices = tuple(inner if i % N == 0 else full for i in range(1, free + 1))
    tail = (bytes(N - 1) + b"\x01") * reps
    for b in range(1, M):
        tail += bytes([b]) * N * reps
    tail += (bytes([M]) * (N - 1) + bytes([M - 1])) * reps
    return DeltaBlock(k, M, N, choices, tail)


def checkpoint_lengths(k: int, b: int, M: int, N: int) -> Tuple[int, int]:
    """Lengths l_k, n_k bracketing the b-th tail segment of block k."""
    if not 0 <= b <= M or M < 2:
        raise ValueError("need M >= 2 and 0 <= b <= M")
    before = sum((1 << i) * (M + 1) * N * (N + 1) for i in range(k))
    ell = (1 << k) * (M + 1) * N * N + (1 << k) * N * b + before
    return ell, ell + (1 << k) * N


@dataclass(frozen=True)
class IrregularSample:
    word: Word
    prefix_len: int
    blocks: Tuple[bytes, ...]

    @property
    def tail(self) -> bytes:
        return self.word.digits[self.prefix_len:]


def sample_irregular(x, j: Optional[int], blocks: int, seed: int, M: int = 2,
                     N: Optional[int] = None) -> IrregularSample:
    """Prefix eps M^N followed by ``blocks`` random irregular blocks."""
    setup = setup_for(x, j, M, N)
    rng = random.Random(seed)
    parts = tuple(build_Delta_jk(k, M, setup.N).sample(rng) for k in range(blocks))
    word = Word(setup.prefix.digits + b"".join(parts), M)
    return IrregularSample(word, setup.prefix_len, parts)


def theta(tail: bytes, b: int, k: int, M: int, N: int) -> int:
    """Occurrences of digit b inside the free parts of blocks 0..k."""
    pos, total = 0, 0
    for i in range(k + 1):
        blk = build_Delta_jk(i, M, N)
        total += tail[pos:pos + blk.free_len].count(b)
        pos += blk.length
    return total


def theta_bound(k: int, M: int, N: int) -> int:
    return sum((1 << i) * (M + 1) * N * (N - 1) for i in range(k + 1))


@dataclass
class FreqProfile:
    checkpoints: List[Tuple[int, int, Fraction]] = field(default_factory=list)
    spread: Fraction = Fraction(0)

    @property
    def min_ratio(self) -> Fraction:
        return min(r for _, _, r in self.checkpoints)

    @property
    def max_ratio(self) -> Fraction:
        return max(r for _, _, r in self.checkpoints)


def oscillation_evidence(seq, b: int, checkpoints: Sequence[Tuple[int, int]]) -> FreqProfile:
    """Digit-b ratios at each (l_k, n_k) pair; spread over the last two pairs."""
    digits = seq.digits if isinstance(seq, Word) else bytes(seq)
    if not checkpoints:
        raise ValueError("no checkpoints")
    need = max(max(p) for p in checkpoints)
    if need > len(digits):
        raise ValueError(f"sequence of length {len(digits)} does not reach checkpoint {need}")
    prof = FreqProfile()
    # one pass of prefix counts up to the furthest checkpoint
    marks = sorted({n for p in checkpoints for n in p})
    counts = {}
    running, last = 0, 0
    for n in marks:
        running += digits[last:n].count(b)
        counts[n] = running
        last = n
    for ell, n in checkpoints:
        prof.checkpoints.append((ell, b, Fraction(counts[ell], ell)))
        prof.checkpoints.append((n, b, Fraction(counts[n], n)))
    recent = [r for _, _, r in prof.checkpoints[-4:]]
    prof.spread = max(recent) - min(recent)
    return prof


def digit_ratios(seq, M: int) -> List[Fraction]:
    digits = seq.digits if isinstance(seq, Word) else bytes(seq)
    return [Fraction(digit_count(digits, b), len(digits)) for b in range(M + 1)]


# -- dimension bounds ---------------------------------------------------------

def gamma_j(x, M: int, N: int, tol=Fraction(1, 1 << 80)) -> CertifiedReal:
    """Largest base of the run-constrained set: eps M^N (M^(N-1) (M-1))^inf."""
    setup = setup_for(x, None, M, N)
    s = PeriodicSeq(setup.prefix.digits, bytes([M]) * (N - 1) + bytes([M - 1]), M)
    return solve_base(s, setup.x, tol=tol)


@dataclass(frozen=True)
class DimBound:
    """symbolic / log_{M+1}(gamma), where ``symbolic`` is a natural-log combination.

    ``symbolic.value(M + 1)`` is the dimension of the symbolic set;
    ``lo``/``hi`` enclose the bound after dividing by log gamma.
    """

    M: int
    N: int
    symbolic: LogCombo
    log_gamma: Tuple[float, float]
    lo: float
    hi: float

    @property
    def symbolic_value(self) -> float:
        return self.symbolic.value(self.M + 1)

    @property
    def value(self) -> float:
        return (self.lo + self.hi) / 2


def _log_base(g: CertifiedReal, base: int) -> Tuple[float, float]:
    lb = math.log(base)
    lo = math.nextafter(math.log(g.lo) / lb, -math.inf)
    hi = math.nextafter(math.log(g.hi) / lb, math.inf)
    if g.hi <= base:
        hi = min(hi, 1.0)
    return lo, hi


def _divide(sym: LogCombo, M: int, N: int, gamma) -> DimBound:
    base = M + 1
    if gamma is None:
        lg = (1.0, 1.0)
    else:
        g = gamma if isinstance(gamma, CertifiedReal) else CertifiedReal.exact(to_fraction(gamma))
        lg = _log_base(g, base)
    v = sym.value(base)
    lo = math.nextafter(v / lg[1], -math.inf)
    hi = math.nextafter(v / lg[0], math.inf)
    return DimBound(M, N, sym, lg, lo, hi)


def min_vector(M: int, N: int) -> FreqVector:
    m0 = block_length_mk(0, M, N)
    return min(freq_vectors(M, m0), key=count_D)


def dim_lower_SN(M: int, N: int, gamma=None) -> DimBound:
    """log C(m_0; n*) / (m_0 log gamma) with logs in base M+1; gamma=None means M+1."""
    v = min_vector(M, N)
    return _divide(LogCombo.of(count_D(v)) / v.m, M, N, gamma)


def entropy_SN(M: int, N: int) -> float:
    """-sum p_b log_{M+1} p_b for the minimizing count vector."""
    v = min_vector(M, N)
    return -sum(c / v.m * math.log(c / v.m, M + 1) for c in v.counts if c)


def stirling_slack(M: int, N: int) -> float:
    """Explicit bound on |dim_SN symbolic - entropy| from Robbins' form of Stirling."""
    m0 = block_length_mk(0, M, N)
    return ((M + 2) / 2 * math.log(2 * math.pi * m0) + 1) / (m0 * math.log(M + 1))


def ir_symbolic(M: int, N: int) -> LogCombo:
    """(N-1)/(N+1) log(M+1) + log(M-1)/(N+1); for M = 1 the limit (N-2)/(N+1) log 2."""
    if M == 1:
        return LogCombo.of(2, Fraction(N - 2, N + 1))
    return LogCombo.of(M + 1, Fraction(N - 1, N + 1)) + LogCombo.of(M - 1, Fraction(1, N + 1))


def dim_lower_Ir(M: int, N: int, gamma=None) -> DimBound:
    return _divide(ir_symbolic(M, N), M, N, gamma)

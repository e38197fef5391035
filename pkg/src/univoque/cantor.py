"""Cantor-set geometry of run-constrained univoque sets.

For x with a finite base-(M+1) expansion, the bases q whose quasi-greedy
expansion of x lies in the run-constrained set (no N consecutive 0s or Ms
after a fixed prefix) form a Cantor set.  Its basic intervals are indexed by
admissible words; this module builds them level by level and measures gaps,
thickness and dimension bounds.
"""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from .expansion import finite_base_M1_expansion, q_G
from .logcombo import LogCombo
from .reals import CertifiedReal, compare, decide, to_fraction
from .solver import interval_endpoints, solve_base
from .symbolic import PeriodicSeq, Word, trailing_run

ENUM_CAP = 2_000_000


# -- symbolic level ---------------------------------------------------------

@dataclass(frozen=True)
class Setup:
    """Prefix data for the run-constrained set of x: prefix eps_1..eps_m M^N."""

    x: Fraction
    M: int
    N: int
    eps: Word

    @property
    def prefix(self) -> Word:
        return self.eps + bytes([self.M]) * self.N

    @property
    def prefix_len(self) -> int:
        return len(self.eps) + self.N

    @property
    def ell(self) -> int:
        """1-based position of the first nonzero digit of the prefix."""
        for i, d in enumerate(self.prefix, start=1):
            if d:
                return i
        raise ValueError("prefix has no nonzero digit")


def setup_for(x, j: Optional[int] = None, M: int = 1, N: Optional[int] = None) -> Setup:
    """Default run bound N = m + j, with m the length of x's base-(M+1) expansion."""
    x = to_fraction(x)
    fe = finite_base_M1_expansion(x, M)
    if not fe.m:
        raise ValueError(f"{x} has no finite base-{M + 1} expansion")
    if N is None:
        if j is None:
            raise ValueError("give either j or N")
        N = fe.m + j
    if N < 2:
        raise ValueError("run bound N must be at least 2")
    return Setup(x, M, N, fe.eps)


def _extend(word: Word, prefix_len: int, N: int) -> List[Word]:
    M = word.M
    d = word.digits[prefix_len:]
    out = []
    for c in range(M + 1):
        if (c == 0 or c == M) and trailing_run(d, c) + 1 >= N:
            continue
        out.append(word + bytes([c]))
    return out


def children(word: Word, setup: Setup) -> List[Word]:
    return _extend(word, setup.prefix_len, setup.N)


def count_admissible(n: int, N: int, M: int) -> int:
    """Number of length-n words over {0..M} with no run of N zeros or N Ms."""
    # state: (digit class, run length); class 0 -> zeros, 1 -> Ms, 2 -> other
    if n == 0:
        return 1
    runs = {}
    for c in range(M + 1):
        key = (0, 1) if c == 0 else (1, 1) if c == M else (2, 0)
        runs[key] = runs.get(key, 0) + 1
    for _ in range(n - 1):
        nxt: dict = {}
        for (cls, r), cnt in runs.items():
            for c in range(M + 1):
                if c == 0:
                    key = (0, r + 1 if cls == 0 else 1)
                elif c == M:
                    key = (1, r + 1 if cls == 1 else 1)
                else:
                    key = (2, 0)
                if key[0] < 2 and key[1] >= N:
                    continue
                nxt[key] = nxt.get(key, 0) + cnt
        runs = nxt
    return sum(v for (cls, r), v in runs.items() if cls == 2 or r < N)


def enumerate_omega(x, j: Optional[int], n: int, M: int = 1, N: Optional[int] = None,
                    cap: int = ENUM_CAP) -> List[Word]:
    """All admissible words with n free digits after the prefix, in lexicographic order."""
    setup = setup_for(x, j, M, N)
    total = count_admissible(n, setup.N, M)
    if total > cap:
        raise OverflowError(f"{total} words at level {n} exceed the enumeration cap {cap}")
    level = [setup.prefix]
    for _ in range(n):
        level = [c for w in level for c in children(w, setup)]
    return level


# -- covers -----------------------------------------------------------------

@dataclass(frozen=True)
class BasicInterval:
    word: object
    lo: CertifiedReal
    hi: CertifiedReal
    level: int

    @property
    def length(self) -> CertifiedReal:
        return self.hi - self.lo

    @property
    def mid_bounds(self) -> Tuple[Fraction, Fraction]:
        return self.lo.mid, self.hi.mid


@dataclass(frozen=True)
class Gap:
    """The open interval between sibling basic intervals ``left`` and ``right``."""

    left: BasicInterval
    right: BasicInterval

    @property
    def level(self) -> int:
        return self.left.level

    @property
    def lo(self) -> CertifiedReal:
        return self.left.hi

    @property
    def hi(self) -> CertifiedReal:
        return self.right.lo

    @property
    def length(self) -> CertifiedReal:
        return self.right.lo - self.left.hi


@dataclass
class Cover:
    levels: List[List[BasicInterval]]
    gaps: List[Gap]
    setup: Optional[Setup] = None
    tol_bits: int = 0

    @property
    def level(self) -> int:
        return len(self.levels) - 1

    @property
    def intervals(self) -> List[BasicInterval]:
        return self.levels[-1]

    @property
    def hull(self) -> BasicInterval:
        return self.levels[0][0]

    def gaps_at(self, level: int) -> List[Gap]:
        return [g for g in self.gaps if g.level == level]

    def max_width(self) -> Fraction:
        return max(max(iv.lo.width, iv.hi.width) for lv in self.levels for iv in lv)

    def min_gap(self) -> Fraction:
        return min(g.length.lo for g in self.gaps) if self.gaps else Fraction(0)

    @classmethod
    def from_levels(cls, levels: Sequence[Sequence[Tuple]]) -> "Cover":
        """Build a cover from nested levels of (lo, hi) pairs; parents found by containment."""
        built: List[List[BasicInterval]] = []
        gaps: List[Gap] = []
        for k, lv in enumerate(levels):
            row = []
            for i, (lo, hi) in enumerate(sorted(lv)):
                lo_r = lo if isinstance(lo, CertifiedReal) else CertifiedReal.exact(lo)
                hi_r = hi if isinstance(hi, CertifiedReal) else CertifiedReal.exact(hi)
                row.append(BasicInterval((k, i), lo_r, hi_r, k))
            if k:
                parent_of = []
                for iv in row:
                    owners = [p for p in built[-1] if p.lo.lo <= iv.lo.lo and iv.hi.hi <= p.hi.hi]
                    if len(owners) != 1:
                        raise ValueError(f"interval at level {k} is not nested in a unique parent")
                    parent_of.append(owners[0].word)
                for a, b, pa, pb in zip(row, row[1:], parent_of, parent_of[1:]):
                    if pa == pb:
                        gaps.append(Gap(a, b))
            built.append(row)
        return cls(built, gaps)

    def check_invariants(self) -> None:
        """Raise AssertionError unless levels are sorted, disjoint and nested."""
        for k, lv in enumerate(self.levels):
            for a, b in zip(lv, lv[1:]):
                assert a.hi.hi < b.lo.lo, f"level {k}: overlapping intervals {a.word} {b.word}"
            for iv in lv:
                assert iv.lo.hi <= iv.hi.lo, f"level {k}: empty interval {iv.word}"
            if k:
                parents = self.levels[k - 1]
                for iv in lv:
                    par = _parent(iv, parents)
                    assert par is not None, f"level {k}: {iv.word} has no parent"
                    assert par.lo.lo <= iv.lo.lo and iv.hi.hi <= par.hi.hi, \
                        f"level {k}: {iv.word} not nested in its parent"
        for g in self.gaps:
            assert g.lo.hi < g.hi.lo, f"uncertified gap after {g.left.word}"


def _parent(iv: BasicInterval, parents: List[BasicInterval]) -> Optional[BasicInterval]:
    if isinstance(iv.word, Word):
        for p in parents:
            if p.word == iv.word[:-1]:
                return p
        return None
    for p in parents:
        if p.lo.lo <= iv.lo.lo and iv.hi.hi <= p.hi.hi:
            return p
    return None


def default_tol_bits(setup: Setup, n: int) -> int:
    # gaps at level n are of order (M+1)^-(n_j + N); keep 40 spare bits
    longest = setup.prefix_len + n
    return math.ceil((longest + setup.N + 1) * math.log2(setup.M + 1)) + 40


def build_cover(x, j: Optional[int], n: int, M: int = 1, N: Optional[int] = None,
                tol_bits: Optional[int] = None, threads: int = 1, cap: int = ENUM_CAP,
                max_rounds: int = 6) -> Cover:
    """Basic intervals of levels 0..n and the sibling gaps between them.

    Endpoint enclosures are tightened until each is narrower than 1/1000 of
    the smallest gap, so every ratio computed from the cover is certified.
    """
    setup = setup_for(x, j, M, N)
    if count_admissible(n, setup.N, M) > cap:
        raise OverflowError(f"level {n} exceeds the enumeration cap {cap}")
    bits = tol_bits if tol_bits is not None else default_tol_bits(setup, n)
    words_by_level = [[setup.prefix]]
    for _ in range(n):
        words_by_level.append([c for w in words_by_level[-1] for c in children(w, setup)])

    def solve(word: Word):
        e = interval_endpoints(word, setup.x, setup.N, Fraction(1, 1 << bits), setup.prefix_len)
        return e.left, e.right

    flat = [w for lv in words_by_level for w in lv]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            ends = list(pool.map(solve, flat))
    else:
        ends = [solve(w) for w in flat]
    table = dict(zip(flat, ends))

    for _ in range(max_rounds):
        levels = [[BasicInterval(w, *table[w], k) for w in lv] for k, lv in enumerate(words_by_level)]
        gaps = []
        for k in range(1, len(levels)):
            for a, b in zip(levels[k], levels[k][1:]):
                if a.word[:-1] == b.word[:-1]:
                    gaps.append(Gap(a, b))
        cover = Cover(levels, gaps, setup, bits)
        min_gap = min((g.length.lo for g in gaps), default=Fraction(1))
        if min_gap > 0 and cover.max_width() * 1000 < min_gap:
            return cover
        bits += 32
        table = {w: (lo.refined(bits), hi.refined(bits)) for w, (lo, hi) in table.items()}
    raise ArithmeticError("could not certify the gaps of the cover")


# -- thickness --------------------------------------------------------------

def _ratio(num: CertifiedReal, den: CertifiedReal) -> CertifiedReal:
    lo = num.lo / den.hi if den.hi > 0 else Fraction(0)
    if den.lo <= 0:
        raise ArithmeticError("gap length not certified positive")
    return CertifiedReal(max(lo, Fraction(0)), num.hi / den.lo)


def sibling_ratio(gap: Gap) -> CertifiedReal:
    """min(|I_left|, |I_right|) / |G| as an enclosure."""
    a, b, g = gap.left.length, gap.right.length, gap.length
    ra, rb = _ratio(a, g), _ratio(b, g)
    return CertifiedReal(min(ra.lo, rb.lo), min(ra.hi, rb.hi))


def thickness_star(cover: Cover, level: Optional[int] = None) -> CertifiedReal:
    """Levelwise thickness through ``level``: the least sibling ratio over all gaps.

    Only finitely many levels are inspected, so this bounds the true
    infimum from above.  A cover without gaps has thickness +inf, reported
    as a ValueError since it cannot be enclosed.
    """
    top = cover.level if level is None else level
    ratios = [sibling_ratio(g) for g in cover.gaps if g.level <= top]
    if not ratios:
        raise ValueError("cover has no gaps")
    return CertifiedReal(min(r.lo for r in ratios), min(r.hi for r in ratios))


def _as_pair(iv) -> Tuple[Fraction, Fraction]:
    if isinstance(iv, BasicInterval):
        return iv.mid_bounds
    lo, hi = iv
    if isinstance(lo, CertifiedReal):
        return lo.mid, hi.mid
    return to_fraction(lo), to_fraction(hi)


def thickness_ordered(intervals: Iterable, gaps: Optional[Iterable] = None) -> Fraction:
    """Thickness of a finite union of closed intervals under the largest-gap-first order.

    Each bounded gap is removed in order of decreasing length; at that
    moment it splits a piece [L, R] and contributes
    min(lo - L, R - hi) / (hi - lo).  Certified endpoints are replaced by
    their midpoints.
    """
    pieces = sorted(_as_pair(iv) for iv in intervals)
    if not pieces:
        raise ValueError("no intervals")
    for (a_lo, a_hi), (b_lo, b_hi) in zip(pieces, pieces[1:]):
        if b_lo <= a_hi:
            raise ValueError("intervals overlap")
    hull_lo, hull_hi = pieces[0][0], max(p[1] for p in pieces)
    if gaps is None:
        gap_list = [(a[1], b[0]) for a, b in zip(pieces, pieces[1:])]
    else:
        gap_list = [_as_pair(g) for g in gaps]
    if not gap_list:
        raise ValueError("no gaps")
    order = sorted(range(len(gap_list)), key=lambda i: (-(gap_list[i][1] - gap_list[i][0]), i))
    cut_lo: List[Fraction] = []  # sorted gap left ends already removed
    cut_hi: dict = {}
    best: Optional[Fraction] = None
    for i in order:
        lo, hi = gap_list[i]
        pos = bisect.bisect_left(cut_lo, lo)
        left_end = cut_hi[cut_lo[pos - 1]] if pos > 0 else hull_lo
        right_end = cut_lo[pos] if pos < len(cut_lo) else hull_hi
        ratio = min(lo - left_end, right_end - hi) / (hi - lo)
        best = ratio if best is None or ratio < best else best
        cut_lo.insert(pos, lo)
        cut_hi[lo] = hi
    return best


def newhouse_dim_bound(tau) -> float:
    """Newhouse lower bound log 2 / log(2 + 1/tau) for the dimension of a Cantor set."""
    if isinstance(tau, CertifiedReal):
        tau = tau.lo
    if tau == math.inf:
        return 1.0
    tau = to_fraction(tau) if not isinstance(tau, float) else tau
    if tau <= 0:
        raise ValueError("thickness must be positive")
    return math.log(2) / math.log(2 + 1 / float(tau))


# -- Moran estimate ---------------------------------------------------------

@dataclass(frozen=True)
class MoranEstimate:
    """Partial values sum(log #D_k) / (sum m_k log base) for n = 0, 1, ...

    ``symbolic[n]`` is the exact natural-log combination whose value in the
    given base is ``values[n]``.
    """

    base: int
    symbolic: Tuple[LogCombo, ...]
    values: Tuple[float, ...]

    @property
    def value(self) -> float:
        return self.values[-1]


def moran_dim_estimate(counts: Sequence[Union[int, LogCombo]], lengths: Sequence[int],
                       base: int) -> MoranEstimate:
    if not counts or len(counts) != len(lengths):
        raise ValueError("counts and lengths must be nonempty and of equal length")
    acc = LogCombo()
    total = 0
    sym, vals = [], []
    for c, m in zip(counts, lengths):
        acc = acc + (c if isinstance(c, LogCombo) else LogCombo.of(c))
        total += m
        s = acc / total
        sym.append(s)
        vals.append(s.value(base))
    return MoranEstimate(base, tuple(sym), tuple(vals))


# -- certified inequality helpers ----------------------------------------------

def holds(expr: Callable[..., CertifiedReal], reals: Sequence[CertifiedReal],
          strict: bool = False, max_bits: int = 8192) -> bool:
    """Certify ``expr(*reals) >= 0`` (or > 0), refining the inputs as needed."""
    def pred(*rs):
        v = expr(*rs)
        if v.lo > 0 or (not strict and v.lo >= 0):
            return True
        if v.hi < 0 or (strict and v.hi <= 0):
            return False
        return None
    return decide(pred, reals, start_bits=max(64, _current_bits(reals)), max_bits=max_bits)


def _current_bits(reals: Sequence[CertifiedReal]) -> int:
    widest = max((r.width for r in reals), default=Fraction(0))
    if widest == 0:
        return 64
    return max(64, int(math.log2(1 / widest)))


@dataclass(frozen=True)
class SiblingCheck:
    gap: Gap
    parent_len: int
    gap_upper: bool
    left_lower: bool
    right_lower: bool
    ratio_lower: bool

    @property
    def ok(self) -> bool:
        return self.gap_upper and self.left_lower and self.right_lower and self.ratio_lower


def check_sibling_bounds(cover: Cover) -> List[SiblingCheck]:
    """Test every sibling pair of a cover against the explicit gap and length bounds.

    With I_left = [q1, q2], I_right = [q3, q4], parent length n_j and the
    prefix exponent l:
      q3 - q2 < 4 / q3^(n_j + N - l)
      q2 - q1 >= (qG - 1)^2 / (M q2^(n_j + 3))
      q4 - q3 >= (qG - 1)^2 / (M q3^(n_j + 3))
      min(q2 - q1, q4 - q3) / (q3 - q2) >= (qG - 1)^2 / (4M) * q3^(N - l - 3)
    """
    setup = cover.setup
    if setup is None:
        raise ValueError("sibling bounds need a cover built from x")
    M, N, ell = setup.M, setup.N, setup.ell
    qg = q_G(M)
    out = []
    for g in cover.gaps:
        nj = len(g.left.word) - 1
        reals = [g.left.lo, g.left.hi, g.right.lo, g.right.hi, qg]
        gap_upper = holds(lambda q1, q2, q3, q4, c: 4 / q3 ** (nj + N - ell) - (q3 - q2), reals, strict=True)
        left_lower = holds(lambda q1, q2, q3, q4, c: (q2 - q1) - (c - 1) ** 2 / (M * q2 ** (nj + 3)), reals)
        right_lower = holds(lambda q1, q2, q3, q4, c: (q4 - q3) - (c - 1) ** 2 / (M * q3 ** (nj + 3)), reals)

        def ratio_gap(q1, q2, q3, q4, c):
            bound = (c - 1) ** 2 / (4 * M) * q3 ** (N - ell - 3)
            a, b = q2 - q1, q4 - q3
            return CertifiedReal(min(a.lo, b.lo), min(a.hi, b.hi)) - bound * (q3 - q2)

        out.append(SiblingCheck(g, nj, gap_upper, left_lower, right_lower, holds(ratio_gap, reals)))
    return out


# -- hulls of E_k(x) ------------------------------------------------------------

@dataclass(frozen=True)
class HullEntry:
    j: int
    alpha: CertifiedReal
    beta: CertifiedReal
    alpha_seq: PeriodicSeq
    beta_seq: PeriodicSeq


@dataclass(frozen=True)
class HullCheck:
    j: int
    ordered: bool
    upper: bool
    lower1: bool
    lower2: bool
    ratio: CertifiedReal

    @property
    def ok(self) -> bool:
        return self.ordered and self.upper and self.lower1 and self.lower2


@dataclass
class HullSequence:
    x: Fraction
    M: int
    entries: List[HullEntry]
    checks: List[HullCheck] = field(default_factory=list)
    ratio_increasing: bool = False

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and self.ratio_increasing


def hull_sequences(eps: Word, j: int) -> Tuple[PeriodicSeq, PeriodicSeq]:
    M, n = eps.M, 1 << j
    pre = eps.digits + bytes([M]) * n
    return (PeriodicSeq(pre, bytes(n - 1) + b"\x01", M),
            PeriodicSeq(pre, bytes([M]) * (n - 1) + bytes([M - 1]), M))


def build_hulls(x, j_min: int, j_max: int, M: int = 1, tol_bits: int = 128) -> HullSequence:
    """Hulls [alpha_j, beta_j] of the sets with run bound 2^j, and the growth checks."""
    x = to_fraction(x)
    fe = finite_base_M1_expansion(x, M)
    if not fe.m:
        raise ValueError(f"{x} has no finite base-{M + 1} expansion")
    m, eps = fe.m, fe.eps
    if (1 << j_min) <= m or j_min > j_max:
        raise ValueError("need 2^j_min > m and j_min <= j_max")
    tol = Fraction(1, 1 << tol_bits)
    entries = []
    for j in range(j_min, j_max + 2):
        sa, sb = hull_sequences(eps, j)
        entries.append(HullEntry(j, solve_base(sa, x, tol=tol), solve_base(sb, x, tol=tol), sa, sb))

    qg = q_G(M)
    K = M + 1
    C1_den = K ** (m + 1)
    checks = []
    for cur, nxt in zip(entries, entries[1:]):
        j, e = cur.j, 1 << cur.j
        reals = [cur.alpha, cur.beta, nxt.alpha, qg]
        ordered = (holds(lambda a, b, a2, c: b - a, reals, strict=True)
                   and holds(lambda a, b, a2, c: a2 - b, reals, strict=True))
        upper = holds(lambda a, b, a2, c: 2 * K ** 3 / (c - 1) / a2 ** (2 * e + e) - (a2 - b), reals)
        lower1 = holds(lambda a, b, a2, c: (b - a) - (c - 1) ** 2 / C1_den / a2 ** e, reals)
        lower2 = holds(lambda a, b, a2, c: (K - a2) - M * (c - 1) / C1_den / a2 ** (2 * e), reals)
        checks.append(HullCheck(j, ordered, upper, lower1, lower2, _hull_ratio(cur.alpha, cur.beta, nxt.alpha, K)))
    seq = HullSequence(x, M, entries, checks)
    seq.ratio_increasing = all(
        holds(lambda a, b, a2, a_, b_, a2_: _hull_ratio(a_, b_, a2_, K) - _hull_ratio(a, b, a2, K),
              [c1_entries[0].alpha, c1_entries[0].beta, c1_entries[1].alpha,
               c2_entries[0].alpha, c2_entries[0].beta, c2_entries[1].alpha], strict=True)
        for c1_entries, c2_entries in zip(zip(entries, entries[1:]), zip(entries[1:], entries[2:])))
    return seq


def _hull_ratio(a: CertifiedReal, b: CertifiedReal, a2: CertifiedReal, K: int) -> CertifiedReal:
    g = a2 - b
    r1, r2 = _ratio(b - a, g), _ratio(K - a2, g)
    return CertifiedReal(min(r1.lo, r2.lo), min(r1.hi, r2.hi))


# -- intersections and sums ---------------------------------------------------

@dataclass(frozen=True)
class Overlap:
    lo: CertifiedReal
    hi: CertifiedReal
    words: Tuple


def _intervals_of(c) -> List[BasicInterval]:
    return c.intervals if isinstance(c, Cover) else list(c)


def intersect_covers(a, b) -> List[Overlap]:
    """Pairwise intersections of two sorted families of disjoint intervals."""
    xs, ys = _intervals_of(a), _intervals_of(b)
    out = []
    i = k = 0
    while i < len(xs) and k < len(ys):
        u, v = xs[i], ys[k]
        lo = u.lo if compare(u.lo, v.lo) >= 0 else v.lo
        hi_cmp = compare(u.hi, v.hi)
        hi = u.hi if hi_cmp <= 0 else v.hi
        if compare(lo, hi) <= 0:
            out.append(Overlap(lo, hi, (u.word, v.word)))
        if hi_cmp <= 0:
            i += 1
        else:
            k += 1
    return out


def deepen_intersection(setups: Sequence[Setup], min_free: int, max_nodes: int = 20000,
                        tol_bits: Optional[int] = None) -> Optional[Overlap]:
    """Rightmost common point region of several run-constrained sets.

    Depth-first search over tuples of words, always extending the shortest
    word (largest digits first) and keeping only tuples whose basic
    intervals still overlap.  Returns the overlap once every word carries at
    least ``min_free`` digits beyond its prefix, or None if the search dies.
    """
    bits = tol_bits or max(default_tol_bits(s, min_free) for s in setups)
    tol = Fraction(1, 1 << bits)
    visited = 0

    def interval(i, w):
        s = setups[i]
        e = interval_endpoints(w, s.x, s.N, tol, s.prefix_len)
        return e.left, e.right

    def overlap(ivs):
        lo = ivs[0][0]
        hi = ivs[0][1]
        for a, b in ivs[1:]:
            if compare(a, lo) > 0:
                lo = a
            if compare(b, hi) < 0:
                hi = b
        return (lo, hi) if compare(lo, hi) <= 0 else None

    def search(words, ivs):
        nonlocal visited
        visited += 1
        if visited > max_nodes:
            return None
        ov = overlap(ivs)
        if ov is None:
            return None
        free = [len(w) - s.prefix_len for w, s in zip(words, setups)]
        if min(free) >= min_free:
            return Overlap(ov[0], ov[1], tuple(words))
        i = free.index(min(free))
        for child in reversed(children(words[i], setups[i])):
            nw = list(words)
            nw[i] = child
            niv = list(ivs)
            niv[i] = interval(i, child)
            found = search(nw, niv)
            if found is not None:
                return found
        return None

    roots = [s.prefix for s in setups]
    return search(roots, [interval(i, w) for i, w in enumerate(roots)])


@dataclass(frozen=True)
class SumImage:
    hull: Tuple[Fraction, Fraction]
    covered: Tuple[Fraction, Fraction]
    holes: List[Tuple[Fraction, Fraction]]

    @property
    def covered_length(self) -> Fraction:
        return self.covered[1] - self.covered[0]


def sum_image_check(a, b, lam, resolution) -> SumImage:
    """Union of {p + lam*q : p in I, q in J} over interval pairs.

    Inner endpoint bounds are used, so the reported coverage is certified.
    ``covered`` is the longest stretch whose holes are all <= resolution.
    """
    lam = to_fraction(lam)
    resolution = to_fraction(resolution)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    xs, ys = _intervals_of(a), _intervals_of(b)
    segs = []
    for u in xs:
        p_lo, p_hi = u.lo.hi, u.hi.lo
        for v in ys:
            q_lo, q_hi = v.lo.hi, v.hi.lo
            if lam > 0:
                segs.append((p_lo + lam * q_lo, p_hi + lam * q_hi))
            else:
                segs.append((p_lo + lam * q_hi, p_hi + lam * q_lo))
    segs.sort()
    merged = [list(segs[0])]
    for lo, hi in segs[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    holes = [(x[1], y[0]) for x, y in zip(merged, merged[1:])]
    big = [h for h in holes if h[1] - h[0] > resolution]
    # stretches separated by holes larger than the resolution
    best = None
    start = merged[0][0]
    for seg, nxt in zip(merged, merged[1:] + [None]):
        if nxt is None or nxt[0] - seg[1] > resolution:
            run = (start, seg[1])
            if best is None or run[1] - run[0] > best[1] - best[0]:
                best = run
            if nxt is not None:
                start = nxt[0]
    return SumImage((merged[0][0], merged[-1][1]), best, big)

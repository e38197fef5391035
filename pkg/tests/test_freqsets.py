import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import multinomial
from univoque.cantor import setup_for
from univoque.freqsets import (
    FreqVector,
    block_length_mk,
    build_Delta_jk,
    build_or_count_Djk,
    checkpoint_lengths,
    count_D,
    count_Djk,
    digit_ratios,
    dim_lower_Ir,
    dim_lower_SN,
    entropy_SN,
    freq_vectors,
    gamma_j,
    ir_symbolic,
    lower_bound_Djk,
    oscillation_evidence,
    sample_Djk,
    sample_irregular,
    sample_simply_normal,
    sn_block_ends,
    sn_run_bound,
    stirling_slack,
    theta,
    theta_bound,
)
from univoque.logcombo import LogCombo
from univoque.symbolic import max_run

# Smallest per-k spread of the digit-M ratio between l_k and n_k seen on the
# first run (seeds 0..4, M = 2, N = 14, k = 2, 3: 0.0074), halved and frozen.
DERIVED_SPREAD = Fraction(1, 200)


def test_block_length():
    assert block_length_mk(0, 1, 7) == 4
    assert block_length_mk(1, 1, 7) == 8
    assert block_length_mk(2, 2, 13) == 4 * 3 * 4
    with pytest.raises(ValueError):
        block_length_mk(0, 1, 6)
    assert sn_run_bound(3, 2) == 96


def test_small_block_examples():
    assert {v.counts for v in freq_vectors(1, 4)} == {(2, 2), (1, 3)}
    assert count_D(FreqVector((2, 2), 4)) == 6 and count_D(FreqVector((1, 3), 4)) == 4
    assert count_Djk(0, 1, 7) == 10
    words = build_or_count_Djk(0, 1, 7).words
    assert len(words) == 10 and all(len(w) == 4 and w.count(0) in (1, 2) for w in words)
    blk = build_Delta_jk(0, 2, 7)
    assert blk.count == 3 ** 126 and blk.length == 168
    assert checkpoint_lengths(0, 0, 2, 7) == (3 * 49, 3 * 49 + 7)


def test_freq_vectors():
    vs = freq_vectors(2, 12)
    assert {v.counts for v in vs} == {(4, 4, 4), (4, 3, 5), (3, 4, 5), (3, 3, 6)}
    assert all(0 <= v.last_offset <= 2 for v in vs)
    with pytest.raises(ValueError):
        FreqVector((4, 8), 12)
    with pytest.raises(ValueError):
        freq_vectors(2, 10)


@pytest.mark.parametrize("counts", [(4, 4), (3, 5), (4, 4, 4), (3, 3, 6)])
def test_count_D_is_multinomial(counts):
    assert count_D(FreqVector(counts, sum(counts))) == multinomial(counts)


@pytest.mark.parametrize("M,N,kmax", [(1, 7, 2), (1, 9, 2), (2, 13, 1)])
def test_Djk_enumeration_matches_count(M, N, kmax):
    for k in range(kmax):
        res = build_or_count_Djk(k, M, N)
        assert res.words is not None
        assert len(res.words) == res.exact_count == count_Djk(k, M, N)
        assert res.exact_count >= res.lower_bound
        allowed = {v.counts for v in freq_vectors(M, block_length_mk(k, M, N))}
        half = block_length_mk(k, M, N) // 2
        prev = set(build_or_count_Djk(k - 1, M, N).words) if k else None
        for w in res.words:
            assert tuple(w.count(b) for b in range(M + 1)) in allowed
            if prev is not None:
                assert w[:half] in prev and w[half:] in prev


def test_count_grows_past_enumeration():
    assert count_Djk(6, 1, 7) >= lower_bound_Djk(6, 1, 7)
    assert build_or_count_Djk(4, 1, 7, cap=1000).words is None


def test_sampler_is_uniform_on_small_block():
    rng = random.Random(1)
    words = build_or_count_Djk(1, 1, 7).words
    seen = {}
    for _ in range(4000):
        w = sample_Djk(rng, 1, 1, 7)
        seen[w] = seen.get(w, 0) + 1
    assert set(seen) == set(words)
    expected = 4000 / len(words)
    assert max(seen.values()) < 2 * expected and min(seen.values()) > expected / 2


def test_simply_normal_sample():
    x = Fraction(1, 2)
    N = sn_run_bound(1, 1)
    w = sample_simply_normal(x, 1, 500, seed=3)
    s = setup_for(x, None, 1, N)
    assert w[:s.prefix_len] == s.prefix
    assert max_run(w[s.prefix_len:], 0) < N and max_run(w[s.prefix_len:], 1) < N
    assert sample_simply_normal(x, 1, 500, seed=3) == w
    assert sample_simply_normal(x, 1, 500, seed=4) != w
    tail = w[s.prefix_len:]
    end = sn_block_ends(1, N, 10)
    last = max(e for e in end if e <= len(tail))
    mk = block_length_mk(end.index(last), 1, N)
    for r in digit_ratios(tail[:last], 1):
        assert abs(r - Fraction(1, 2)) <= Fraction(1, mk) + Fraction(1, 50)


@pytest.mark.parametrize("k,M,N", [(0, 1, 5), (1, 1, 4), (0, 2, 4), (1, 3, 3)])
def test_delta_counts(k, M, N):
    blk = build_Delta_jk(k, M, N)
    assert blk.recount() == blk.count
    assert blk.log_count() == LogCombo.of(blk.count)


def test_delta_requires_run_bound():
    with pytest.raises(ValueError):
        build_Delta_jk(0, 2, 2)


def test_delta_m1_paired_positions():
    blk = build_Delta_jk(0, 1, 5)
    for n in range(1, blk.free_len // 5 + 1):
        assert blk.choices[5 * n - 2] == (0,) and blk.choices[5 * n - 1] == (1,)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 5), (2, 14), (3, 4), (1, 6)]))
def test_irregular_samples_admissible_and_theta_bounded(seed, MN):
    M, N = MN
    x = Fraction(1, 3) if M == 2 else Fraction(1, 2)
    smp = sample_irregular(x, None, 3, seed, M, N)
    tail = smp.tail
    assert max_run(tail, 0) < N and max_run(tail, M) < N
    for k in range(3):
        for b in (0, M):
            assert theta(tail, b, k, M, N) <= theta_bound(k, M, N)


def test_checkpoints_bracket_top_segment():
    M, N = 2, 14
    smp = sample_irregular(Fraction(1, 3), None, 4, 0, M, N)
    for k in (2, 3):
        ell, n = checkpoint_lengths(k, M, M, N)
        seg = smp.tail[ell:n]
        assert seg == (bytes([M]) * (N - 1) + bytes([M - 1])) * (1 << k)


@pytest.mark.parametrize("seed", range(5))
def test_irregular_spread_matches_segment_formula(seed):
    M, N = 2, 14
    tail = sample_irregular(Fraction(1, 3), None, 4, seed, M, N).tail
    for k in (2, 3):
        ell, n = checkpoint_lengths(k, M, M, N)
        prof = oscillation_evidence(tail, M, [(ell, n)])
        r_ell, r_n = prof.checkpoints[0][2], prof.checkpoints[1][2]
        # the segment adds exactly 2^k (N-1) copies of M over 2^k N digits
        assert r_n - r_ell == (Fraction((1 << k) * (N - 1)) - r_ell * (1 << k) * N) / n
        assert prof.spread >= DERIVED_SPREAD


def test_oscillation_evidence_errors():
    with pytest.raises(ValueError):
        oscillation_evidence(b"\x00\x01", 1, [(1, 5)])
    with pytest.raises(ValueError):
        oscillation_evidence(b"\x00\x01", 1, [])


def test_sn_bound_and_stirling():
    prev = 0.0
    for j in range(1, 6):
        N = sn_run_bound(j, 1)
        d = dim_lower_SN(1, N, gamma_j(Fraction(1, 2), 1, N))
        assert d.lo > prev
        prev = d.lo
        assert abs(d.symbolic_value - entropy_SN(1, N)) <= stirling_slack(1, N)
    assert prev > 0.9


def test_ir_closed_form():
    assert ir_symbolic(2, 14) == LogCombo.of(3, Fraction(13, 15)) + LogCombo.of(1, Fraction(1, 15))
    assert math.isclose(ir_symbolic(2, 14).value(3), 13 / 15)
    assert math.isclose(ir_symbolic(3, 10).value(4), 9 / 11 + math.log(2, 4) / 11)
    assert math.isclose(ir_symbolic(1, 10).value(2), 8 / 11)
    d = dim_lower_Ir(2, 14)
    assert d.lo <= 13 / 15 <= d.hi


def test_gamma_below_top_base():
    g = gamma_j(Fraction(1, 3), 2, 14)
    assert 1 < g.hi < 3

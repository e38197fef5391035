import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import count_run_constrained, middle_thirds, prefix_value, self_similar
from univoque.cantor import (
    Cover,
    build_cover,
    build_hulls,
    check_sibling_bounds,
    count_admissible,
    enumerate_omega,
    holds,
    intersect_covers,
    moran_dim_estimate,
    newhouse_dim_bound,
    setup_for,
    sum_image_check,
    thickness_ordered,
    thickness_star,
)
from univoque.logcombo import LogCombo
from univoque.reals import CertifiedReal
from univoque.symbolic import max_run


@pytest.mark.parametrize("n,N,M", [(n, N, M) for M in (1, 2) for N in (2, 3, 4) for n in range(0, 8 if M == 1 else 6)])
def test_count_admissible_matches_brute_force(n, N, M):
    assert count_admissible(n, N, M) == count_run_constrained(n, N, M)


def test_setup():
    s = setup_for(Fraction(1, 2), 2)
    assert s.N == 3 and str(s.prefix) == "0111" and s.ell == 2
    with pytest.raises(ValueError):
        setup_for(Fraction(1, 3), 2)
    with pytest.raises(ValueError):
        setup_for(1, 2)


@pytest.mark.parametrize("x,M", [(Fraction(1, 2), 1), (Fraction(1, 3), 2), (Fraction(1, 2), 3)])
def test_one_free_digit_gives_every_child(x, M):
    assert len(enumerate_omega(x, 2, 1, M)) == M + 1


def test_enumerate_omega_respects_runs():
    s = setup_for(Fraction(1, 2), 2)
    words = enumerate_omega(Fraction(1, 2), 2, 6)
    assert len(words) == count_admissible(6, 3, 1)
    assert words == sorted(words, key=lambda w: w.digits)
    for w in words:
        d = w[s.prefix_len:]
        assert max_run(d, 0) < 3 and max_run(d, 1) < 3


def test_middle_thirds_thickness_is_one():
    cover = Cover.from_levels(middle_thirds(4))
    cover.check_invariants()
    assert thickness_star(cover).lo == 1
    assert thickness_ordered(middle_thirds(4)[-1]) == 1


@pytest.mark.parametrize("r", [Fraction(1, 3), Fraction(1, 4), Fraction(2, 5)])
def test_self_similar_thickness(r):
    levels = self_similar(r, 4)
    expected = r / (1 - 2 * r)
    assert thickness_star(Cover.from_levels(levels)).lo == expected
    assert thickness_ordered(levels[-1]) == expected


def test_single_gap():
    assert thickness_ordered([(0, 1), (2, 4)]) == 1
    assert thickness_ordered([(0, 3), (4, 5)]) == 1
    assert thickness_ordered([(0, 1), (3, 4)]) == Fraction(1, 2)
    with pytest.raises(ValueError):
        thickness_ordered([(0, 2), (1, 3)])


def test_newhouse_bound():
    assert math.isclose(newhouse_dim_bound(1), math.log(2) / math.log(3))
    assert newhouse_dim_bound(math.inf) == 1.0
    assert newhouse_dim_bound(100) > newhouse_dim_bound(1)
    with pytest.raises(ValueError):
        newhouse_dim_bound(0)


def test_moran_on_middle_thirds_counts():
    est = moran_dim_estimate([2, 2, 2], [1, 1, 1], 3)
    assert est.symbolic[-1] == LogCombo.of(2)
    assert math.isclose(est.value, math.log(2) / math.log(3))


@pytest.fixture(scope="module")
def half_cover():
    return build_cover(Fraction(1, 2), 2, 3)


def test_cover_invariants(half_cover):
    half_cover.check_invariants()
    assert half_cover.max_width() * 1000 < half_cover.min_gap()
    assert len(half_cover.intervals) == count_admissible(3, 3, 1)


def test_cover_endpoints_expand_x(half_cover):
    # each endpoint base q gives an expansion of x starting with the interval's word
    x = Fraction(1, 2)
    for iv in half_cover.intervals:
        for end in (iv.lo, iv.hi):
            for q in (end.lo, end.hi):
                v = prefix_value(list(iv.word), q)
                slack = Fraction(1, 1 << 40)
                assert v - slack <= x <= v + 1 / q ** len(iv.word) / (q - 1) + slack


def test_cover_sibling_bounds(half_cover):
    assert all(c.ok for c in check_sibling_bounds(half_cover))
    tau = thickness_star(half_cover)
    assert tau.lo > 1
    assert thickness_ordered(half_cover.intervals) >= tau.lo * Fraction(999, 1000)


def test_threads_give_same_cover(half_cover):
    other = build_cover(Fraction(1, 2), 2, 3, threads=4)
    assert [iv.word for iv in other.intervals] == [iv.word for iv in half_cover.intervals]
    assert all(abs(a.lo.mid - b.lo.mid) < Fraction(1, 1 << 60)
               for a, b in zip(other.intervals, half_cover.intervals))


def test_holds():
    third = CertifiedReal.exact(Fraction(1, 3))
    assert holds(lambda t: t - Fraction(1, 4), [third])
    assert not holds(lambda t: Fraction(1, 4) - t, [third])
    assert holds(lambda t: t - t, [third]) and not holds(lambda t: t - t, [third], strict=True)


def test_hulls_small():
    seq = build_hulls(Fraction(1, 2), 2, 3)
    assert seq.ok
    assert [e.j for e in seq.entries] == [2, 3, 4]
    assert seq.entries[0].alpha.hi < seq.entries[0].beta.lo < seq.entries[1].alpha.lo
    with pytest.raises(ValueError):
        build_hulls(Fraction(1, 4), 0, 2)


def test_intersect_synthetic():
    a = Cover.from_levels([[(0, 10)], [(0, 3), (7, 10)]])
    b = Cover.from_levels([[(2, 8)], [(2, 4), (6, 8)]])
    got = [(o.lo.lo, o.hi.lo) for o in intersect_covers(a, b)]
    assert got == [(2, 3), (7, 8)]


@pytest.mark.parametrize("n", [2, 4])
def test_sum_of_middle_thirds_covers_hull(n):
    cover = Cover.from_levels(middle_thirds(n))
    img = sum_image_check(cover, cover, 1, Fraction(1, 3 ** n))
    assert img.covered == (0, 2) and img.holes == []


def test_sum_image_synthetic():
    a = Cover.from_levels([[(0, 3)], [(0, 1), (2, 3)]])
    img = sum_image_check(a, a, 1, Fraction(1, 100))
    # {0..1, 2..3} + {0..1, 2..3} = [0, 6] without holes
    assert img.hull == (0, 6) and img.covered == (0, 6) and img.holes == []
    img = sum_image_check(a, a, Fraction(1, 10), Fraction(1, 100))
    assert img.holes and img.covered_length < 4
    with pytest.raises(ValueError):
        sum_image_check(a, a, 0, 1)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 30), st.integers(1, 30)), min_size=2, max_size=8))
def test_thickness_ordered_single_gap_lower_bound(spans):
    # every removed gap leaves pieces at least as long as its own neighbours
    pieces, pos = [], Fraction(0)
    for length, gap in spans:
        pieces.append((pos, pos + length))
        pos += length + gap
    tau = thickness_ordered(pieces)
    neighbour = min(min(a[1] - a[0], b[1] - b[0]) / (b[0] - a[1]) for a, b in zip(pieces, pieces[1:]))
    assert tau >= neighbour

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import brute_greedy, brute_lazy, count_expansion_prefixes, prefix_value
from univoque.expansion import (
    Univoque,
    alpha,
    eval_seq,
    finite_base_M1_expansion,
    greedy_expand,
    is_univoque_point,
    is_valid_alpha,
    lazy_expand,
    q_G,
    quasi_greedy_expand,
    seq_value_exact,
)
from univoque.symbolic import parse_seq

PHI = q_G(1)


def digits(p):
    return list(p.digits)


def test_known_greedy_prefixes():
    assert str(greedy_expand(1, 2, 5)) == "11111"
    assert str(greedy_expand(1, PHI, 5)) == "11000"
    assert str(greedy_expand(Fraction(1, 2), 2, 5)) == "10000"


def test_lazy_one_in_golden_base():
    # 0 1^inf is an expansion of 1 and it is the smallest one
    lz = lazy_expand(1, PHI, 6)
    assert str(lz) == "011111"
    assert lz.as_periodic() == parse_seq("0(1)", 1)


def test_quasi_greedy_of_one():
    assert alpha(PHI, 10).as_periodic() == parse_seq("(10)", 1)
    assert str(alpha(q_G(3), 8, 3)) == "21212121"
    assert alpha(3, 8, 2).as_periodic() == parse_seq("(2)", 2)


def test_golden_point_not_unique():
    assert is_univoque_point(1, PHI, 20) is Univoque.NOT_UNIQUE


def test_generalized_golden_ratio():
    assert q_G(2).lo == 2 and q_G(4).lo == 3
    # q_G(1) is the golden ratio, q_G(3) = 1 + sqrt 3
    assert abs(float(PHI) - (1 + 5 ** 0.5) / 2) < 1e-15
    assert abs(float(q_G(3)) - (1 + 3 ** 0.5)) < 1e-15


def test_base_out_of_range():
    with pytest.raises(ValueError):
        greedy_expand(1, 3, 5, 1)


def test_finite_base_expansion():
    f = finite_base_M1_expansion(Fraction(1, 2), 1)
    assert str(f.word) == "1" and f.m == 1
    assert f.quasi_greedy == parse_seq("0(1)", 1)
    g = finite_base_M1_expansion(Fraction(5, 9), 2)
    assert str(g.word) == "12" and g.m == 2 and str(g.eps) == "11"
    assert finite_base_M1_expansion(Fraction(1, 3), 1).m is None
    assert finite_base_M1_expansion(1, 1).m == 0


cases = st.tuples(
    st.sampled_from([1, 2, 3]),
    st.fractions(min_value=0, max_value=1, max_denominator=60),
    st.fractions(min_value=0, max_value=1, max_denominator=60),
)


def make_case(M, xs, qs):
    lo = Fraction(float(q_G(M).hi)) + Fraction(1, 1000)
    q = lo + (M + 1 - lo) * qs
    cap = Fraction(M) / (q - 1)
    return q, xs * cap


@settings(max_examples=60, deadline=None)
@given(cases)
def test_greedy_and_lazy_match_brute_force(case):
    M, xs, qs = case
    q, x = make_case(M, xs, qs)
    n = 10
    assert digits(greedy_expand(x, q, n, M)) == brute_greedy(x, q, n, M)
    assert digits(lazy_expand(x, q, n, M)) == brute_lazy(x, q, n, M)


@settings(max_examples=60, deadline=None)
@given(cases)
def test_lazy_is_reflected_greedy(case):
    M, xs, qs = case
    q, x = make_case(M, xs, qs)
    cap = Fraction(M) / (q - 1)
    lz = digits(lazy_expand(x, q, 12, M))
    # the smallest expansion of x mirrors the largest expansion of cap - x
    assert lz == [M - d for d in digits(greedy_expand(cap - x, q, 12, M))]


@settings(max_examples=60, deadline=None)
@given(cases)
def test_order_and_tail_bounds(case):
    M, xs, qs = case
    assume(xs > 0)
    q, x = make_case(M, xs, qs)
    n = 12
    g, qg, lz = (f(x, q, n, M) for f in (greedy_expand, quasi_greedy_expand, lazy_expand))
    assert digits(lz) <= digits(qg) <= digits(g)
    v = prefix_value(digits(g), q)
    assert v + g.tail_lo <= x <= v + g.tail_hi


@settings(max_examples=40, deadline=None)
@given(cases)
def test_univoque_verdict_matches_prefix_count(case):
    M, xs, qs = case
    q, x = make_case(M, xs, qs)
    verdict = is_univoque_point(x, q, 14, M)
    assert (verdict is Univoque.NOT_UNIQUE) == (count_expansion_prefixes(x, q, 14, M) >= 2)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Fraction(11, 10), max_value=2, max_denominator=30))
def test_alpha_prefix_dominates_its_shifts(q):
    a = digits(alpha(q, 40))
    assert a[0] == 1
    for k in range(1, 40):
        assert a[k:] <= a[:40 - k]


def test_valid_alpha_examples():
    assert is_valid_alpha(parse_seq("(10)", 1))
    assert is_valid_alpha(parse_seq("(1)", 1))
    assert not is_valid_alpha(parse_seq("(01)", 1))
    assert not is_valid_alpha(parse_seq("1(0)", 1))


def test_eval_seq_exact_and_certified():
    s = parse_seq("0(1)", 1)
    assert seq_value_exact(s, Fraction(2)) == Fraction(1, 2)
    v = eval_seq(s, PHI)
    assert v.contains(1) or abs(float(v) - 1) < 1e-15


def test_worked_examples():
    assert str(quasi_greedy_expand(Fraction(1, 2), 2, 4)) == "0111"
    phi_value = eval_seq(parse_seq("(10)", 1), PHI).refined(100)
    assert phi_value.lo <= 1 <= phi_value.hi
    assert abs(sum(float(PHI) ** -(2 * i + 1) for i in range(200)) - 1) < 1e-12


def test_komornik_loreti_point_never_not_unique():
    from univoque.solver import komornik_loreti

    q = komornik_loreti(Fraction(1, 1 << 200))
    assert is_univoque_point(1, q, 64) is not Univoque.NOT_UNIQUE


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=Fraction(1, 50), max_value=1, max_denominator=50),
       st.fractions(min_value=Fraction(81, 50), max_value=2, max_denominator=50),
       st.fractions(min_value=Fraction(81, 50), max_value=2, max_denominator=50))
def test_quasi_greedy_increases_with_base(x, q1, q2):
    assume(q1 < q2)
    a, b = digits(quasi_greedy_expand(x, q1, 16)), digits(quasi_greedy_expand(x, q2, 16))
    assert a <= b

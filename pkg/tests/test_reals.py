import math
import pickle
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from univoque.reals import (
    CertifiedReal,
    PrecisionExhausted,
    Quadratic,
    affine_sqrt,
    ceil_dyadic,
    compare,
    decide,
    floor_dyadic,
    rounded,
)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=40)


@given(fracs, fracs, st.sampled_from([2, 3, 5, 13, 21]))
def test_quadratic_matches_float(a, b, D):
    v = Quadratic(a, b, D)
    assert math.isclose(float(v), float(a) + float(b) * math.sqrt(D), rel_tol=1e-9, abs_tol=1e-9)
    lo, hi = v.enclosure(80)
    assert lo <= hi and hi - lo <= Fraction(1, 1 << 80)
    assert math.floor(v) <= float(v) < math.floor(v) + 1
    assert math.ceil(v) - 1 < float(v) <= math.ceil(v)


@given(fracs, fracs, fracs, fracs)
def test_quadratic_field_ops(a, b, c, d):
    u, v = Quadratic(a, b, 5), Quadratic(c, d, 5)
    assert (u + v) - v == u
    assert (u * v) == (v * u)
    if v != 0:
        assert (u / v) * v == u
    assert (u < v) == (float(u) < float(v)) or abs(float(u) - float(v)) < 1e-9


def test_golden_ratio_identity():
    phi = Quadratic(Fraction(1, 2), Fraction(1, 2), 5)
    assert phi * phi == phi + 1
    assert 1 / phi == phi - 1


def test_affine_sqrt_perfect_square_is_exact():
    r = affine_sqrt(1, 1, 9, 2)
    assert r.is_exact and r.lo == 2


def test_affine_sqrt_refines():
    r = affine_sqrt(1, 1, 5, 2)
    assert r.exact_value is not None
    fine = r.refined(200)
    assert fine.width <= Fraction(1, 1 << 200)
    lo, hi = r.algebraic.enclosure(220)
    assert fine.lo <= hi and lo <= fine.hi


def test_refiner_survives_pickle():
    r = affine_sqrt(1, 1, 5, 2)
    back = pickle.loads(pickle.dumps(r._refiner))
    assert back(100) == r._refiner(100)


def test_enclosure_arithmetic_contains_true_value():
    a = CertifiedReal(Fraction(1), Fraction(2))
    b = CertifiedReal(Fraction(-3), Fraction(1))
    p = a * b
    assert p.lo == -6 and p.hi == 2
    with pytest.raises(ValueError):
        CertifiedReal(2, 1)


def test_unrefinable_raises():
    with pytest.raises(PrecisionExhausted):
        CertifiedReal(0, 1).refined(10)


def test_compare_and_decide():
    phi = affine_sqrt(1, 1, 5, 2)
    assert compare(phi, CertifiedReal.exact(Fraction(1618, 1000))) == 1
    assert compare(CertifiedReal.exact(3), CertifiedReal.exact(3)) == 0
    close = CertifiedReal.exact(floor_dyadic(phi.refined(90).lo, 80))
    assert compare(phi, close) == 1
    assert decide(lambda u: True if u.lo > 1 else (False if u.hi <= 1 else None), [phi])
    with pytest.raises(PrecisionExhausted):
        compare(CertifiedReal(0, 1), CertifiedReal(0, 1))


@given(fracs, st.integers(1, 40))
def test_dyadic_rounding_brackets(v, bits):
    assert floor_dyadic(v, bits) <= v <= ceil_dyadic(v, bits)
    assert ceil_dyadic(v, bits) - floor_dyadic(v, bits) <= Fraction(1, 1 << bits)
    r = rounded(CertifiedReal.exact(v), bits)
    assert r.contains(v)

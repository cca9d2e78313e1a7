from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asd_forge.padic import ZpRing
from asd_forge.series import PuiseuxSeries, _schoolbook, int_poly_mul, int_series_inverse

ints = st.integers(min_value=-10**6, max_value=10**6)


@given(st.lists(ints, min_size=1, max_size=40), st.lists(ints, min_size=1, max_size=40))
def test_kronecker_matches_schoolbook(a, b):
    n = len(a) + len(b) - 1
    assert int_poly_mul(a, b, n) == _schoolbook(a, b, n, 0)


def test_kronecker_huge_and_negative_coefficients():
    a = [(-1) ** i * 10 ** 60 + i for i in range(300)]
    b = [7 ** i - 3 ** 50 for i in range(200)]
    assert int_poly_mul(a, b, 499) == _schoolbook(a, b, 499, 0)


def test_geometric_series_inverse():
    assert int_series_inverse([1, -1], 10) == [1] * 10


def series(coeffs, prec):
    return PuiseuxSeries([Fraction(c) for c in coeffs], 1, prec=prec)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=12))
def test_reversion_round_trip(tail):
    prec = 14
    f = PuiseuxSeries([1] + tail, 1, prec=prec)
    g = f.revert()
    x = PuiseuxSeries.gen(prec)
    assert f.compose(g) == x
    assert g.compose(f) == x


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=10), st.integers(2, 4))
def test_nth_root_round_trip(tail, n):
    f = PuiseuxSeries([1] + tail, 0, prec=12)
    r = f.nth_root(n)
    assert r ** n == f


def test_puiseux_grid_alignment():
    a = PuiseuxSeries.monomial(1, Fraction(1, 2), prec=10)
    b = PuiseuxSeries.monomial(1, Fraction(1, 3), prec=12)
    c = a * b
    assert c.ram == 6
    assert c[Fraction(5, 6)] == 1
    assert c[Fraction(1, 2)] == 0


def test_truncation_is_absolute():
    f = PuiseuxSeries([1, 2, 3], 0, prec=3)
    g = PuiseuxSeries([0, 1], 0, prec=2)
    assert (f * g).prec == 2
    with pytest.raises(IndexError):
        (f * g).coeff(2)


def test_d_operator_on_ram_grid():
    f = PuiseuxSeries([1, 1, 1], 1, ram=5, prec=4)
    d = f.d_operator()
    assert [d.coeff(n) for n in (1, 2, 3)] == [Fraction(1, 5), Fraction(2, 5), Fraction(3, 5)]


def test_modular_ring_arithmetic():
    R = ZpRing(7, 3)
    f = PuiseuxSeries([1, 7, 49, 343], 0, prec=4, ring=R)
    g = f.inverse()
    assert f * g == PuiseuxSeries([1], 0, prec=4, ring=R)


def test_exp_log_inverse():
    f = PuiseuxSeries([0, 1, Fraction(1, 3)], 0, prec=10)
    assert f.exp().log() == f.truncate(10)

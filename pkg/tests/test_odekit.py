import time
from fractions import Fraction

import pytest

from asd_forge.odekit import ODEError, apery_like, gamma15_pipeline, zagier_scan

from . import oracles


@pytest.fixture(scope="module")
def bundle():
    return gamma15_pipeline(200)


def test_reference_expansions(bundle):
    E1 = [bundle.E1[Fraction(k, 5)] for k in range(5)]
    E2 = [bundle.E2[Fraction(k, 5)] for k in range(1, 5)]
    f = [bundle.f[Fraction(k, 10)] for k in (1, 3, 5, 7)]
    assert E1 == [1, -2, -6, 7, 26]
    assert E2 == [1, -7, 19, -23]
    assert f == [1, Fraction(-9, 2), Fraction(27, 8), Fraction(147, 16)]


def test_hauptmodul_is_rogers_ramanujan_product(bundle):
    # t = q5 prod (1 - q5^n)^(5 (n|5))
    def e(m):
        r = m % 5
        return 0 if r == 0 else (5 if r in (1, 4) else -5)

    ref = oracles.power_product(e, 150)
    assert [bundle.t.coeff(n + 1) for n in range(150)] == ref


def test_holomorphic_solution_is_apery(bundle):
    assert [bundle.A.coeff(n) for n in range(40)] == [apery_like(n) for n in range(40)]


def test_forms_are_roots_of_products(bundle):
    N = 60
    assert (bundle.f * bundle.f).truncate(N) == (bundle.E1 * bundle.E2).with_ram(10).truncate(N)
    assert (bundle.h1 ** 4).truncate(N) == (bundle.E1 ** 3 * bundle.E2).with_ram(20).truncate(N)


def test_runtime_budget():
    start = time.perf_counter()
    gamma15_pipeline(200)
    assert time.perf_counter() - start < 5


def test_pipeline_order_floor():
    with pytest.raises(ValueError):
        gamma15_pipeline(10)


def test_zagier_apery_case_integral():
    r = zagier_scan(11, -1, -3, 60)
    assert r.integral
    assert [int(x) for x in r.coefficients[:6]] == [1, 3, 19, 147, 1251, 11253]


def test_zagier_generic_case_fails():
    r = zagier_scan(11, 1, 3, 30)
    assert not r.integral and r.first_failure is not None


def test_zagier_degenerate():
    with pytest.raises(ODEError):
        zagier_scan(1, 0, 1, 10)

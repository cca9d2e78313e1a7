from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asd_forge.curves import CurveSpec
from asd_forge.fgl import (
    StrictLog,
    additive_log,
    asd_ec_check,
    cfgl_congruence,
    ec_formal_log,
    group_law_from_log,
    hilbert_identity_holds,
    honda_transfer,
    legendre_log_coefficient,
    multiplicative_log,
    mu_extract,
    two_term_check,
    unit_root_alpha,
)
from asd_forge.series import PuiseuxSeries

X3X = CurveSpec.short_weierstrass(1, 0)


def test_multiplicative_group_law():
    G = group_law_from_log(multiplicative_log(10), 10)
    # -log(1-x): G = x + y - xy
    assert dict(G.items()) == {(1, 0): 1, (0, 1): 1, (1, 1): -1}


def test_additive_group_law():
    G = group_law_from_log(additive_log(8), 8)
    assert dict(G.items()) == {(1, 0): 1, (0, 1): 1}


@pytest.mark.parametrize("curve", [X3X, CurveSpec.legendre(-1), CurveSpec.legendre(2)])
def test_group_law_axioms_to_degree_10(curve):
    G = group_law_from_log(ec_formal_log(curve, 10), 10)
    assert G.has_identity()
    assert G.is_commutative()
    assert G.is_associative(10)
    for p in (5, 7, 11, 13):
        assert G.is_integral(p)


def test_x3x_log_closed_form():
    log = ec_formal_log(X3X, 200)
    for n in range(1, 201):
        want = comb((n - 1) // 2, (n - 1) // 4) if n % 4 == 1 else 0
        assert log[n] == want


def test_legendre_log_closed_form_rational_lambda():
    lam = Fraction(1, 3)
    log = ec_formal_log(CurveSpec.legendre(lam), 41)
    assert all(log[2 * k + 1] == legendre_log_coefficient(k, lam) for k in range(21))


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_asd_ec(p):
    for curve in (X3X, CurveSpec.legendre(-1), CurveSpec.legendre(2)):
        assert asd_ec_check(curve, p, 400).passed


def test_asd_ec_negative_control():
    log = ec_formal_log(X3X, 200)
    bumped = StrictLog(tuple(log[n] + (1 if n == 25 else 0) for n in range(1, 201)))
    assert not asd_ec_check(X3X, 5, 200, log=bumped).passed


@pytest.mark.parametrize("p", [5, 13])
def test_honda_transfer(p):
    h = honda_transfer(X3X, p, 2)
    assert h.passed
    assert h.mu_lseries.values[:2] == [Fraction(2 if p == 5 else 6), -1] or h.expected_lseries


@pytest.mark.parametrize("p", [5, 7, 13])
def test_hilbert_identity(p):
    log = ec_formal_log(X3X, p ** 3)
    mu = mu_extract(log, p, 2)
    assert hilbert_identity_holds(log, mu)


def _phi(tail, N):
    return PuiseuxSeries([0, 1] + list(tail), 0, prec=N + 1)


@settings(max_examples=12, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_substitution_invariance_of_mu_verdicts(tail):
    p, depth = 5, 2
    N = p ** (depth + 1)
    log = ec_formal_log(X3X, N)
    moved = log.substitute(_phi(tail, N))
    before = cfgl_congruence(log, mu_extract(log, p, depth), depth)
    after = cfgl_congruence(moved, mu_extract(moved, p, depth), depth)
    assert [v.passed for v in before.verdicts] == [v.passed for v in after.verdicts]
    assert after.passed


def test_two_term_for_ordinary_cm_prime():
    p = 13
    alpha = unit_root_alpha(X3X, p, 4)
    log = ec_formal_log(X3X, p ** 3)
    assert two_term_check(log, p, alpha, 2).passed


def test_mu_extract_needs_enough_terms():
    with pytest.raises(ValueError):
        mu_extract(ec_formal_log(X3X, 20), 5, 2)

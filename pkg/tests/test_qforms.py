from fractions import Fraction

import pytest

from asd_forge.padic import ZpRing
from asd_forge.qforms import (
    REGISTRY,
    chi_minus3,
    chi_minus4,
    delta,
    delta_int,
    eta_form,
    expand_named,
    f_combined,
    hecke_recursion_check,
    j_invariant,
    kibelbek_forms,
    lambda_expand,
    theta3,
    weak_form_g,
)

from . import oracles


def test_delta_against_eisenstein_oracle():
    ref = oracles.delta(120)
    got = delta_int(120)
    assert got[1:120] == ref[1:120]


def test_delta_series_wrapper():
    d = delta(6)
    assert [d[n] for n in range(1, 6)] == [1, -24, 252, -1472, 4830]


def test_weak_form_g_against_oracle():
    ref = oracles.weak_g(30)
    g = weak_form_g(28)
    assert [g[n] for n in range(-1, 27)] == ref[:28]
    assert g[1] == -142236


def test_weak_form_g_modular_reduction():
    R = ZpRing(11, 12)
    g = weak_form_g(60, R)
    exact = weak_form_g(60)
    assert all(g[n] == R.coerce(exact[n]) for n in range(-1, 59))


def test_j_invariant():
    j = j_invariant(5)
    assert [j[n] for n in (-1, 0, 1, 2, 3)] == [1, 744, 196884, 21493760, 864299970]


def test_theta_lambda_identity_pieces():
    th = theta3(10)
    assert [th[Fraction(n * n, 2)] for n in range(4)] == [1, 2, 2, 2]
    lam = lambda_expand(4)
    assert lam[Fraction(1, 2)] == 16 and lam[1] == -128


@pytest.mark.parametrize("name, lead", [("f1", Fraction(1, 8)), ("f3", Fraction(3, 8)),
                                        ("f5", Fraction(5, 8)), ("f7", Fraction(7, 8))])
def test_eta_forms_support(name, lead):
    s = eta_form(name, 40)
    assert s[lead] == 1
    # f_j lives on exponents == j/8 mod 1
    for n in range(s.offset, s.prec):
        e = Fraction(n, s.ram)
        if s.coeff(n):
            assert (e - lead).denominator == 1


def test_eta4_6_is_a_hecke_eigenform():
    s = eta_form("eta4_6", 800)
    seq = [s[n] for n in range(800)]
    for p in (5, 13, 17, 29):
        assert hecke_recursion_check(seq, p, 3, chi_minus4(p), 800 // p - 1).passed
    assert seq[5] == -6 and seq[13] == 10


def test_f_combined_lead():
    s = f_combined(4)
    assert s[Fraction(1, 8)] == 1


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_delta_hecke(p):
    tau = delta_int(2000 * p + 2)
    assert hecke_recursion_check(tau, p, 12, 1, 2000).passed


def test_hecke_detects_a_wrong_sequence():
    tau = list(delta_int(400))
    tau[50] += 1
    rep = hecke_recursion_check(tau, 5, 12, 1, 60)
    assert not rep.passed and 10 in rep.failures


def test_hecke_too_short():
    with pytest.raises(ValueError):
        hecke_recursion_check([0, 1, 2], 5, 12, 1, 10)


def test_kibelbek_form_support_mod_5():
    # the differentials live on single residue classes of the q^(1/10) index mod 5
    forms = kibelbek_forms(40)
    for form in forms:
        classes = {n % 5 for n in range(form.offset, form.prec) if form.coeff(n)}
        assert len(classes) == 1


def test_registry_validates():
    for name in ("delta", "e4", "j", "lambda", "theta3", "eta4_6", "g_weak"):
        expand_named(name, 6)
    with pytest.raises(ValueError):
        expand_named("nope", 5)
    assert "f_combined" in REGISTRY


def test_characters():
    assert [chi_minus3(p) for p in (2, 3, 5, 7)] == [-1, 0, -1, 1]
    assert [chi_minus4(p) for p in (2, 3, 5)] == [0, -1, 1]

"""Acceptance criteria, one test (or pair) per criterion.

Each test records a PASS/FAIL line in the shared ACCEPTANCE table, shown at
the end of the session.  Run directly with ``python3 tests/test_acceptance.py``.
"""
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from asd_forge import hyp as H
from asd_forge.asd.suites import (
    G_REFERENCE,
    G_VERIFIED,
    SUITES,
    gamma15_sqrt,
    kibelbek,
    ks_example,
    asd_ec,
    run_suite,
)
from asd_forge.curves import CurveSpec, genus2_charpoly
from asd_forge.fgl import (
    asd_ec_check,
    cfgl_congruence,
    ec_formal_log,
    group_law_from_log,
    honda_transfer,
    mu_extract,
)
from asd_forge.odekit import gamma15_pipeline
from asd_forge.padic import (
    ZpRing,
    central_binomial_ratio,
    gamma_p,
    gamma_p_int,
    gross_koblitz,
    gross_koblitz_branch_scan,
    primes_in,
    rational_mod,
)
from asd_forge.qforms import delta_int, eta_form, hecke_recursion_check, weak_form_g
from asd_forge.series import PuiseuxSeries

try:
    from .conftest import ACCEPTANCE
except ImportError:  # run as a script
    from conftest import ACCEPTANCE


@contextmanager
def criterion(key, text):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - start
        ACCEPTANCE[key] = f"[{'PASS' if ok else 'FAIL'}] {key} {text} ({dt:.1f} s)"


def test_c01_pipeline_expansions():
    with criterion("C01", "weight-1 pipeline reproduces E1, E2, f exactly, N=200 under 5 s"):
        start = time.perf_counter()
        b = gamma15_pipeline(200)
        elapsed = time.perf_counter() - start
        assert [b.E1[Fraction(k, 5)] for k in range(5)] == [1, -2, -6, 7, 26]
        assert [b.E2[Fraction(k, 5)] for k in range(1, 5)] == [1, -7, 19, -23]
        assert [b.f[Fraction(k, 10)] for k in (1, 3, 5, 7)] == [1, Fraction(-9, 2), Fraction(27, 8), Fraction(147, 16)]
        assert b.E1[Fraction(1, 10)] == 0 and b.f[Fraction(2, 10)] == 0
        assert elapsed < 5


def test_c02_sqrt_e1e2_three_term():
    with criterion("C02", "sqrt(E1 E2) 3-term law mod p^(2r), p in 7..19, indices <= 1000, under 60 s"):
        start = time.perf_counter()
        cells = [gamma15_sqrt(p, 1000) for p in (7, 11, 13, 17, 19)]
        assert all(c.passed for c in cells), [c.lines() for c in cells if not c.passed]
        assert all(c.reports[0].verdicts for c in cells)
        assert time.perf_counter() - start < 60


def test_c03_elliptic_logs_and_honda():
    with criterion("C03", "elliptic formal logs mod p^r at p = 5, 7, 11, 13, n p^r <= 400; Honda depth 2 at 5, 13"):
        curves = (CurveSpec.short_weierstrass(1, 0), CurveSpec.legendre(-1), CurveSpec.legendre(2))
        for p in (5, 7, 11, 13):
            for c in curves:
                rep = asd_ec_check(c, p, 400)
                assert rep.passed and rep.verdicts, (str(c), p)
        for p in (5, 13):
            assert honda_transfer(curves[0], p, 2).passed


@pytest.mark.xfail(strict=True, reason="reference value -1432236 has a stray digit; the form gives -142236")
def test_c04a_reference_g_coefficients():
    g = weak_form_g(4)
    got = {n: int(g[n]) for n in G_REFERENCE}
    ACCEPTANCE["C04a"] = (
        "[FAIL] C04a reference g coefficients: got -142236 at q^1 (two independent routes agree), "
        "reference -1432236 has a stray digit; 51123200 and 39826861650 match (expected failure)"
    )
    assert got == G_REFERENCE


def test_c04b_weak_form_congruence():
    with criterion("C04b", "g = (-142236, 51123200, 39826861650) by oracle; weak-form law p = 11, 13, n <= 20p^2; "
                           "Delta Hecke exact n <= 2000, p <= 13"):
        from . import oracles

        g = weak_form_g(4)
        assert {n: int(g[n]) for n in G_VERIFIED} == G_VERIFIED
        assert oracles.weak_g(6)[2:5] == [G_VERIFIED[n] for n in (1, 2, 3)]
        for p in (11, 13):
            cell = ks_example(p, hecke_n=10)
            assert cell.passed, cell.lines()
        for p in (2, 3, 5, 7, 11, 13):
            tau = delta_int(2000 * p + 2)
            assert hecke_recursion_check(tau, p, 12, 1, 2000).passed


def test_c05_genus_two():
    with criterion("C05", "y^2 = x^5 + 2: charpoly T^4 + p^2 at 3, 7, 13; 5-term law at 3, 7; 3-term law refuted"):
        assert genus2_charpoly(13).charpoly == (1, 0, 0, 0, 169)
        for p in (3, 7):
            cell = kibelbek(p)
            assert cell.passed, cell.lines()
            assert all(cell.checks[f"f{i} three-term law refuted"] for i in (1, 2))
            for i in (1, 2):
                for B in (p, -p):
                    doc = cell.findings[f"f{i} three-term B={B}"]
                    assert doc["refutation"]["reverified"] is True


def test_c06_supercongruences():
    with criterion("C06", "Ramanujan-type sum mod p^4 for 3 < p < 50; CDE mod p^2 and Coster r <= 2 at 5, 13, 17, 29; "
                          "harmonic binomial sum for 3 < p <= 200"):
        rep = H.van_hamme_check(5)
        assert Fraction(rep.extra["sum"]) == Fraction(10335, 8192)
        assert rep.verdicts[0].achieved == 4
        assert all(H.van_hamme_check(p).passed for p in primes_in(5, 49))
        for p in (5, 13, 17, 29):
            r = H.cde_coster_check(p, 2)
            assert r.passed and [v.required for v in r.verdicts] == [2, 4]
        assert (20 + 64 * (-3 + 2 * 70)) % 169 == 0
        assert all(H.cor4_check(p).passed for p in primes_in(5, 200))


def test_c07_dwork_grid():
    with criterion("C07", "Dwork conditions and conclusion to X^200, k = 1, 2, 3, p = 5, 7, s <= 2, m <= 1"):
        for k in (1, 2, 3):
            for p in (5, 7):
                for s in (1, 2):
                    for m in (0, 1):
                        assert H.dwork_theorem_check(k, p, s, m, N=200).passed, (k, p, s, m)


def test_c08_gross_koblitz():
    with criterion("C08", "Gauss sums = -pi^j Gamma_p(j/(p-1)) to pi-precision 3(p-1), p = 5, 7, all j; branch u = 1"):
        for p in (5, 7):
            for j in range(p - 1):
                lhs, rhs = gross_koblitz(j, p, 3 * (p - 1), branch=1)
                assert lhs == rhs
                assert 1 in gross_koblitz_branch_scan(j, p)
            lhs, rhs = gross_koblitz(0, p)
            assert lhs == -1 and rhs == -1


def test_c09_apery_like():
    with criterion("C09", "Apery numbers mod p^(3n) at 5..13; Atkin-Swinnerton-Dyer type law mod p^n "
                          "(p^(2n) reported) at 7, 11, 13"):
        for p in (5, 7, 11, 13):
            assert H.beukers_check(p, 3, 2).passed
        for p in (7, 11, 13):
            ap = int(eta_form("eta4_6", p + 2)[p])
            thm, conj = H.stienstra_beukers_check(p, ap, 3, 2)
            assert thm.passed and not thm.conjectural
            assert conj.conjectural and conj.verdicts


def test_c10_series_identities():
    with criterion("C10", "Clausen at a = 1/2, 1/3 to order 40; 2F1(1/2,1/2;1;lambda) = theta_3^2 to order 60"):
        assert H.clausen_check(Fraction(1, 2), 40)
        assert H.clausen_check(Fraction(1, 3), 40)
        assert H.theta_identity_check(60)


def test_c11_properties_and_full_run():
    with criterion("C11", "group-law axioms deg 10, substitution invariance, Gamma_p grids, binomial identity, "
                          "reversion; full default run under 10 min"):
        rng = random.Random(11)
        x3x = CurveSpec.short_weierstrass(1, 0)
        for curve in (x3x, CurveSpec.legendre(-1), CurveSpec.legendre(2)):
            G = group_law_from_log(ec_formal_log(curve, 10), 10)
            assert G.has_identity() and G.is_commutative() and G.is_associative(10)
        p, depth = 5, 2
        N = p ** (depth + 1)
        log = ec_formal_log(x3x, N)
        base = [v.passed for v in cfgl_congruence(log, mu_extract(log, p, depth), depth).verdicts]
        for _ in range(5):
            phi = PuiseuxSeries([0, 1] + [rng.randint(-3, 3) for _ in range(4)], 0, prec=N + 1)
            moved = log.substitute(phi)
            assert [v.passed for v in cfgl_congruence(moved, mu_extract(moved, p, depth), depth).verdicts] == base
        for q in (5, 7):
            for s in range(3):
                mod = q ** (s + 1)
                for n in range(1, 30):
                    assert all(gamma_p_int(n + m * mod, q, mod) == gamma_p_int(n, q, mod) for m in range(1, 10))
            for x in (Fraction(1, 2), Fraction(1, 3), Fraction(3)):
                x0 = rational_mod(x, q) or q
                assert gamma_p(x, q, 4) * gamma_p(1 - x, q, 4) == ZpRing(q, 4).coerce((-1) ** x0)
            for n in range(201):
                lhs, rhs = central_binomial_ratio(n, q)
                assert lhs == rhs
        for _ in range(20):
            f = PuiseuxSeries([1] + [rng.randint(-20, 20) for _ in range(10)], 1, prec=14)
            x = PuiseuxSeries.gen(14)
            assert f.compose(f.revert()) == x
        start = time.perf_counter()
        results = [run_suite(name) for name in SUITES]
        assert all(r.passed for r in results), [r.name for r in results if not r.passed]
        assert time.perf_counter() - start < 600


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

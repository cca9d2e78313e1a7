import json
from fractions import Fraction

import pytest

from asd_forge.asd.engine import (
    INF,
    CoeffSeq,
    CongruenceSpec,
    DegenerateData,
    InsufficientData,
    check,
    solve_ap,
    tm_ratios,
    tm_two_term_check,
)
from asd_forge.asd.suites import bundle_for
from asd_forge.hyp import fermat_a
from asd_forge.numfield import PadicEmbedding, QuadraticNumber
from asd_forge.padic import ZpRing
from asd_forge.qforms import delta_int, eta_form


def tau_seq(n):
    return CoeffSeq.from_list(delta_int(n + 1), name="tau")


def test_exact_eigenform_has_infinite_margin():
    seq = tau_seq(600)
    spec = CongruenceSpec.three_term(5, 4830, 5 ** 11, 12)
    rep = check(seq, spec, 600)
    assert rep.passed
    assert all(v.achieved == INF for v in rep.verdicts)


def test_index_orientation():
    spec = CongruenceSpec(7, (1, 0, 0, 0, 49))
    assert spec.top == 2
    assert spec.indices(3) == [(147, 1), (21, 1), (3, 1), (3, 7), (3, 49)]


def test_modulus_laws():
    s = CongruenceSpec.three_term(5, 1, 1, 3)
    assert [s.exponent(M) for M in (1, 5, 25)] == [2, 4, 6]
    w = CongruenceSpec.three_term(5, 1, 1, 12, law="weak")
    assert [w.exponent(M) for M in (1, 5, 25)] == [0, 11, 22]
    c = CongruenceSpec.three_term(5, 1, 1, 2, law=lambda M: 7)
    assert c.exponent(3) == 7
    with pytest.raises(ValueError):
        CongruenceSpec.three_term(5, 1, 1, 2, law="strong")


def test_non_integral_indices_vanish():
    seq = CoeffSeq.from_list(range(10))
    assert seq.at(7, 2) == 0 and seq.at(8, 2) == 4
    assert seq[Fraction(3, 2)] == 0


def test_insufficient_data():
    seq = tau_seq(40)
    with pytest.raises(InsufficientData):
        check(seq, CongruenceSpec.three_term(5, 4830, 5 ** 11, 12), 200)


@pytest.fixture(scope="module")
def f_seq():
    return CoeffSeq.from_series(bundle_for(1000).f.truncate(1001), "f")


def test_wrong_ap_is_rejected(f_seq):
    p = 13
    A = int(eta_form("eta4_6", p + 2)[p])
    good = check(f_seq, CongruenceSpec.three_term(p, A, p * p, 3), 1000)
    bad = check(f_seq, CongruenceSpec.three_term(p, A + p, p * p, 3), 1000)
    assert good.passed and not bad.passed


def test_solve_then_check(f_seq):
    p = 13
    sol = solve_ap(f_seq, p, 3, p * p, 1, 1000)
    assert sol.solved
    A = int(eta_form("eta4_6", p + 2)[p])
    assert (sol.value.v - A) % p ** sol.precision == 0
    assert check(f_seq, CongruenceSpec.three_term(p, int(sol.value.v), p * p, 3), 1000).passed


def test_solve_quadratic_sequence():
    b = bundle_for(1000)
    g1 = CoeffSeq.from_series(b.g1.truncate(1001))
    g2 = CoeffSeq.from_series(b.g2.truncate(1001))
    vals = tuple(QuadraticNumber(g1[n], g2[n], -1) for n in range(1, 1001))
    seq = CoeffSeq(vals, 1, 15)
    emb = PadicEmbedding(7, 8)
    sol = solve_ap(seq, 7, 3, 49, 1, embedding=emb)
    assert sol.solved
    z = emb(QuadraticNumber(5, 0, -1)) - emb.ring.coerce(sol.value)
    assert not z or z.valuation() >= sol.precision


def test_refutation_reverifies():
    # a_n supported on n == 1 mod 5 with a_1 = 1: a_p A = a_(p^2) + B a_1 has no solution when p != 1 mod 5
    vals = [1 if n % 5 == 1 else 0 for n in range(200)]
    seq = CoeffSeq.from_list(vals)
    sol = solve_ap(seq, 3, 2, 3, 2)
    assert not sol.solved
    assert sol.refutation.reverify()
    doc = sol.to_json()
    assert doc["refutation"]["reverified"] is True


def test_degenerate():
    seq = CoeffSeq.from_list([0] * 100)
    with pytest.raises(DegenerateData):
        solve_ap(seq, 5, 2, 5, 1)


def test_report_json_schema():
    rep = check(tau_seq(200), CongruenceSpec.three_term(7, -16744, 7 ** 11, 12, label="tau"), 200)
    doc = json.loads(json.dumps(rep.to_json()))
    assert {"suite", "prime", "spec", "verdicts", "summary"} <= set(doc)
    assert set(doc["verdicts"][0]) >= {"n", "required_valuation", "achieved_valuation", "pass"}
    assert doc["summary"]["failed"] == 0


def test_tm_ratios_and_pivot():
    seq = CoeffSeq.from_list([0, 1, 0, 0, 0])
    with pytest.raises(ZeroDivisionError):
        tm_ratios(seq, 2, 1, 1)
    t = tm_ratios(tau_seq(100), 3, 1, 5)
    assert t[0] == 1 and t[1] == Fraction(delta_int(10)[6], 252)


def test_tm_modular_matches_exact():
    R = ZpRing(13, 5)
    seq = tau_seq(13 * 20 + 1)
    exact = tm_ratios(seq, 13, 1, 20)
    modular = tm_ratios(seq, 13, 1, 20, R)
    assert all(R.coerce(a) == b for a, b in zip(exact, modular))


@pytest.mark.parametrize("p", [7, 13])
def test_two_term_translation_fermat(p):
    fa = CoeffSeq.from_list([fermat_a(n) for n in range(p * p * 10 + 1)])
    assert tm_two_term_check(fa, p, 1, 10).passed


def test_padic_values_stay_in_ring():
    R = ZpRing(11, 30)
    seq = tau_seq(11 * 11 * 5).map(R.coerce)
    rep = check(seq, CongruenceSpec.three_term(11, 534612, 11 ** 11, 12, law="weak"), 11 * 11 * 5,
                middles=range(1, 45))
    assert rep.passed

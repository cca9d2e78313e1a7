import pytest

from asd_forge.asd.engine import CoeffSeq
from asd_forge.numfield import QuadraticNumber
from asd_forge.asd.suites import (
    SUITES,
    InadmissiblePrime,
    admissible,
    asd_ec,
    atkin_j,
    conjecture2_check,
    gamma15_sqrt,
    kibelbek,
    ks_example,
    max_workers,
    run_suite,
    thm14,
    thm15,
    thm15_case,
)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_gamma15_sqrt(p):
    assert gamma15_sqrt(p).passed


@pytest.mark.parametrize("p,A", [(5, (0, 3)), (7, (5, 0)), (11, (0, 15)), (13, (-10, 0))])
def test_thm14(p, A):
    cell = thm14(p)
    assert cell.passed, cell.lines()
    assert cell.findings["A_p"]["+"] == str(QuadraticNumber(*A, -1))


# two primes per residue class mod 8
@pytest.mark.parametrize("p", [17, 41, 13, 29, 3, 11, 7, 23])
def test_thm15(p):
    cell = thm15(p)
    assert cell.passed, cell.lines()
    assert thm15_case(p) == p % 8


def test_thm15_wrong_pairing_is_caught():
    cell = thm15(7)
    assert any("swapped" in k for k in cell.checks)


@pytest.mark.parametrize("p", [3, 7])
def test_kibelbek(p):
    cell = kibelbek(p)
    assert cell.passed, cell.lines()


@pytest.mark.parametrize("p", [11, 13])
def test_ks_example(p):
    cell = ks_example(p)
    assert cell.passed, cell.lines()


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_asd_ec(p):
    assert asd_ec(p).passed


@pytest.mark.parametrize("p", [5, 7, 11])
def test_atkin_j(p):
    assert atkin_j(p).passed


def test_atkin_13_is_report_only():
    cell = atkin_j(13)
    conj = [r for r in cell.reports if r.conjectural]
    assert len(conj) == 2 and all(r.passed for r in conj)
    assert cell.passed


@pytest.mark.parametrize("name,p", [("thm14", 3), ("gamma15-sqrt", 2), ("kibelbek", 11), ("thm15", 15), ("thm15", 5)])
def test_inadmissible(name, p):
    assert not admissible(name, p)
    with pytest.raises(InadmissiblePrime):
        SUITES[name].run(p)


def test_run_suite_skips_and_orders():
    res = run_suite("asd-ec", [13, 2, 5, 9, 7], workers=2)
    assert [c.p for c in res.cells] == [5, 7, 13]
    assert res.skipped == [2, 9]
    assert res.passed


def test_run_suite_is_deterministic():
    a = run_suite("atkin-j", [5, 7], workers=1).to_json()
    b = run_suite("atkin-j", [5, 7], workers=2).to_json()
    assert a == b


def test_max_workers_env(monkeypatch):
    monkeypatch.setenv("ASD_FORGE_THREADS", "3")
    assert max_workers(8) == 3
    assert max_workers(1) == 1
    monkeypatch.delenv("ASD_FORGE_THREADS")
    assert max_workers(8) == 8


def test_conjecture2_slot():
    f = CoeffSeq.from_list([0] + [1] * 700)
    rep = conjecture2_check(f, m_max=2, n_count=5)
    assert rep.conjectural and rep.passed
    assert len(rep.verdicts) == 6

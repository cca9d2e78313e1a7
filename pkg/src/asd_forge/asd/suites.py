"""Named verification suites: one cell per (suite, prime).

Each cell returns a :class:`SuiteCell` holding congruence reports and
exact yes/no checks.  Conjectural reports are carried along but never
decide ``passed``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..curves import CurveSpec, genus2_charpoly
from ..fgl import asd_ec_check, honda_transfer
from ..hyp import fermat_a
from ..numfield import PadicEmbedding, QuadraticNumber
from ..odekit import gamma15_pipeline
from ..padic import ZpRing, is_prime, legendre, vp
from ..qforms import (
    chi_minus3,
    delta_int,
    eta_form,
    hecke_recursion_check,
    j_invariant,
    kibelbek_forms,
    weak_form_g,
)
from .engine import (
    CoeffSeq,
    CongruenceReport,
    CongruenceSpec,
    Verdict,
    check,
    solve_ap,
    tm_ratios,
    tm_two_term_check,
)


class InadmissiblePrime(ValueError):
    pass


@dataclass
class SuiteCell:
    suite: str
    p: int
    reports: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    findings: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports if not r.conjectural) and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "prime": self.p,
            "passed": self.passed,
            "checks": self.checks,
            "findings": self.findings,
            "reports": [r.to_json() for r in self.reports],
        }

    def lines(self) -> list[str]:
        out = [r.line() for r in self.reports]
        out += [f"{'PASS' if ok else 'FAIL'} {self.suite} p={self.p} {name}" for name, ok in self.checks.items()]
        return out


def _r_max(p: int, n_max: int) -> int:
    r = 0
    while p ** (r + 1) <= n_max:
        r += 1
    return r


@lru_cache(maxsize=4)
def _bundle(N: int):
    return gamma15_pipeline(N)


def bundle_for(n_max: int):
    """Pipeline large enough for indices up to n_max on the q^(1/10) grid and finer."""
    N = max(n_max // 2 + 2, 40)
    # round up so nearby requests share one computation
    N = -(-N // 50) * 50
    return _bundle(N)


def _seq(series, n_max: int, name: str) -> CoeffSeq:
    return CoeffSeq.from_series(series.truncate(n_max + 1), name)


def _eta_coeff(name: str, p: int) -> int:
    """a_p of eta(4z)^6 (integral grid) or of f_j (exponent p/8)."""
    if name == "eta4_6":
        return int(eta_form(name, p + 2)[p])
    return int(eta_form(name, p // 8 + 2)[Fraction(p, 8)])


# -- Gamma^1(5): sqrt(E1 E2) ------------------------------------------------

def gamma15_sqrt(p: int, n_max: int = 1000) -> SuiteCell:
    """f = sqrt(E1 E2) with A_p from eta(4z)^6 and B_p = (-1|p) p^2, modulus p^(2r)."""
    if p <= 3 or not is_prime(p):
        raise InadmissiblePrime(f"gamma15-sqrt needs a prime p > 3, got {p}")
    cell = SuiteCell("gamma15-sqrt", p)
    f = _seq(bundle_for(n_max).f, n_max, "sqrt(E1 E2)")
    A = _eta_coeff("eta4_6", p)
    B = legendre(-1, p) * p * p
    spec = CongruenceSpec.three_term(p, A, B, 3, label="sqrt(E1E2)", notes={"A_p": A, "B_p": B})
    cell.reports.append(check(f, spec, n_max, suite=cell.suite))
    return cell


# -- index-3 subgroup ---------------------------------------------------------

def _gauss_candidates(A, p: int, precision: int, emb: PadicEmbedding, bound: int):
    """Gaussian integers x + y i with x^2 + y^2 <= bound^2 that embed to A mod p^precision."""
    out = []
    mod = p ** precision
    for x in range(-bound, bound + 1):
        ymax = math.isqrt(bound * bound - x * x)
        for y in range(-ymax, ymax + 1):
            z = emb(QuadraticNumber(x, y, -1)) - A
            if not z or z.valuation() >= precision:
                out.append(QuadraticNumber(x, y, -1))
    return out


def thm14(p: int, n_max: int = 1000) -> SuiteCell:
    """g1 +- i g2 on q^(1/15): solve A_p, pin it in Z[i] by the Weil bound, re-check."""
    if p <= 3 or not is_prime(p):
        raise InadmissiblePrime(f"thm14 needs a prime p > 3, got {p}")
    cell = SuiteCell("thm14", p)
    b = bundle_for(n_max)
    g1 = _seq(b.g1, n_max, "g1")
    g2 = _seq(b.g2, n_max, "g2")
    lo = min(g1.start, g2.start)
    B = chi_minus3(p) * p * p
    r = _r_max(p, n_max)
    solved = {}
    for sign, tag in ((1, "+"), (-1, "-")):
        vals = tuple(QuadraticNumber(g1[n], sign * g2[n], -1) for n in range(lo, n_max + 1))
        seq = CoeffSeq(vals, lo, 15, f"g1 {tag} i g2")
        emb = PadicEmbedding(p, 2 * r + 6)
        sol = solve_ap(seq, p, 3, B, r, n_max, embedding=emb)
        key = f"b_{tag}"
        if not sol.solved:
            cell.checks[f"{key} solvable"] = False
            cell.findings[key] = sol.to_json()
            continue
        cands = _gauss_candidates(emb.ring.coerce(sol.value), p, sol.precision, emb, 2 * p)
        cell.findings[f"{key} lattice candidates"] = [str(c) for c in cands]
        cell.checks[f"{key} unique in Weil box"] = len(cands) == 1
        if len(cands) != 1:
            continue
        A = cands[0]
        solved[tag] = A
        spec = CongruenceSpec.three_term(p, A, B, 3, label=f"g1{tag}ig2", notes={"A_p": str(A), "B_p": B})
        cell.reports.append(check(seq, spec, n_max, embedding=PadicEmbedding(p, 2 * r + 4), suite=cell.suite))
    known = {5: QuadraticNumber(0, 3, -1), 7: QuadraticNumber(5, 0, -1)}
    if p in known and "+" in solved:
        cell.checks["b_+(p) matches reference eigenform"] = solved["+"] == known[p]
    if "+" in solved and "-" in solved:
        cell.checks["b_- is the conjugate of b_+"] = solved["-"] == solved["+"].conjugate()
    cell.findings["A_p"] = {k: str(v) for k, v in solved.items()}
    return cell


# -- index-4 subgroup ---------------------------------------------------------

def thm15_case(p: int) -> int:
    if p % 2 == 0 or p % 5 == 0 or not is_prime(p):
        raise InadmissiblePrime(f"thm15 needs an odd prime p != 5, got {p}")
    return p % 8


def _quad(values_a, values_b, d: int, start: int, name: str) -> CoeffSeq:
    vals = tuple(QuadraticNumber(a, c, d) for a, c in zip(values_a, values_b))
    return CoeffSeq(vals, start, 20, name)


def thm15_bases(p: int, n_max: int):
    """(name, sequence, A_p, mu_p) for the basis the residue of p mod 8 selects."""
    b = bundle_for(n_max)
    h1 = _seq(b.h1, n_max, "h1")
    h3 = _seq(b.h3, n_max, "h3")
    # align h3 (starting at index 3) with h1
    h3v = tuple(h3[n] for n in range(h1.start, h1.top + 1))
    h1v = h1.values
    case = thm15_case(p)
    if case == 1:
        s = 1 if pow(2, (p - 1) // 4, p) == 1 else -1
        A = s * _eta_coeff("f1", p)
        return [("h1", h1, A, 1), ("h3", h3, A, 1)], {"sgn": s}
    if case == 5:
        a5 = _eta_coeff("f5", p)
        return [
            ("h1", h1, QuadraticNumber(0, 4 * a5, -1), -1),
            ("h3", h3, QuadraticNumber(0, -4 * a5, -1), -1),
        ], {"a5": a5}
    if case == 3:
        a3 = _eta_coeff("f3", p)
        plus = CoeffSeq(tuple(x + y for x, y in zip(h1v, h3v)), h1.start, 20, "h1+h3")
        minus = CoeffSeq(tuple(x - y for x, y in zip(h1v, h3v)), h1.start, 20, "h1-h3")
        return [
            ("h1+h3", plus, QuadraticNumber(0, 2 * a3, -2), -1),
            ("h1-h3", minus, QuadraticNumber(0, -2 * a3, -2), -1),
        ], {"a3": a3}
    a7 = _eta_coeff("f7", p)
    return [
        ("h1+ih3", _quad(h1v, h3v, -1, h1.start, "h1+ih3"), QuadraticNumber(0, -8 * a7, -2), -1),
        ("h1-ih3", _quad(h1v, tuple(-y for y in h3v), -1, h1.start, "h1-ih3"), QuadraticNumber(0, 8 * a7, -2), -1),
    ], {"a7": a7}


def thm15(p: int, n_max: int = 1000) -> SuiteCell:
    """The residue-class basis of <h1, h3> with the eta-form A_p, modulus p^(2r).

    Square roots enter through a p-adic embedding whose signs nothing in the
    construction fixes; every sign choice is tried and the validating ones recorded.
    """
    case = thm15_case(p)
    cell = SuiteCell("thm15", p)
    bases, info = thm15_bases(p, n_max)
    r = _r_max(p, n_max)
    cell.findings.update({"case": f"p = {case} mod 8", **info})
    branch_sets = [{}] if case == 1 else [{-1: s1, -2: s2} for s1 in (1, -1) for s2 in (1, -1)]
    if case == 5:
        branch_sets = [{-1: 1}, {-1: -1}]
    if case == 3:
        branch_sets = [{-2: 1}, {-2: -1}]
    scan = []
    best = None
    for br in branch_sets:
        reps = []
        for name, seq, A, mu in bases:
            B = mu * p * p
            spec = CongruenceSpec.three_term(p, A, B, 3, label=name, notes={"A_p": str(A), "mu_p": mu, "branches": str(br)})
            emb = PadicEmbedding(p, 2 * r + 4, branches=br)
            reps.append(check(seq, spec, n_max, embedding=emb, suite=cell.suite))
        ok = all(x.passed for x in reps)
        scan.append({"branches": {str(k): v for k, v in br.items()}, "passed": ok})
        if best is None or (ok and not all(x.passed for x in best)):
            best = reps
    cell.reports.extend(best)
    cell.findings["branch_scan"] = scan
    if case != 1:
        # the same data with A_p swapped between the two basis vectors must fail
        br = next((s["branches"] for s in scan if s["passed"]), None)
        if br is not None:
            br = {int(k): v for k, v in br.items()}
            (n0, s0, A0, mu0), (n1, s1, A1, mu1) = bases
            spec = CongruenceSpec.three_term(p, A1, mu0 * p * p, 3, label=f"{n0} with A_p of {n1}")
            swapped = check(s0, spec, n_max, embedding=PadicEmbedding(p, 2 * r + 4, branches=br))
            cell.checks["swapped pairing fails"] = not swapped.passed
    return cell


# -- genus 2 --------------------------------------------------------------------

def _kib_index_bound(p: int, m_max: int, n_max: int) -> int:
    return m_max * p ** (n_max + 2)


def kibelbek(p: int, m_max: int = 3, n_max: int = 2, congruence: bool = True) -> SuiteCell:
    """y^2 = x^5 + 2 at p = 2, 3 mod 5: charpoly T^4 + p^2, 5-term law, no 3-term law."""
    if p % 5 not in (2, 3) or p == 2 or not is_prime(p):
        raise InadmissiblePrime(f"kibelbek needs an odd prime = 2, 3 mod 5, got {p}")
    cell = SuiteCell("kibelbek", p)
    data = genus2_charpoly(p)
    cell.findings["charpoly"] = list(data.charpoly)
    cell.checks["charpoly = T^4 + p^2"] = data.charpoly == (1, 0, 0, 0, p * p)
    if not congruence:
        return cell
    top = _kib_index_bound(p, m_max, n_max)
    ring = ZpRing(p, n_max + 6)
    forms = kibelbek_forms(top // 10 + 2, ring)
    middles = sorted({m * p ** n for m in range(1, m_max + 1) for n in range(1, n_max + 1)})
    for i, form in enumerate(forms[:2], start=1):
        seq = CoeffSeq.from_series(form.truncate(top + 1), f"f{i}")
        spec = CongruenceSpec(p, (1, 0, 0, 0, p * p), 2, "scholl", label=f"f{i} five-term")
        cell.reports.append(check(seq, spec, top, middles=middles, suite=cell.suite))
        refs = []
        for B in (p, -p):
            sol = solve_ap(seq, p, 2, B, n_max + 1, n_max=top // p, embedding=PadicEmbedding(p, ring.N))
            refs.append(sol.refutation is not None and sol.refutation.reverify())
            cell.findings[f"f{i} three-term B={B}"] = sol.to_json()
        cell.checks[f"f{i} three-term law refuted"] = all(refs)
    return cell


# -- Kazalicki-Scholl example --------------------------------------------------

G_VERIFIED = {1: -142236, 2: 51123200, 3: 39826861650}
G_REFERENCE = {1: -1432236, 2: 51123200, 3: 39826861650}


def ks_example(p: int, n_max: int | None = None, hecke_n: int = 2000) -> SuiteCell:
    """g = E4^6/Delta - 1464 E4^3 against tau_p with modulus p^(11 ord_p n)."""
    if p < 11 or not is_prime(p):
        raise InadmissiblePrime(f"ks-example needs a prime p >= 11, got {p}")
    cell = SuiteCell("ks-example", p)
    n_max = n_max or 20 * p * p
    K = 11 * max(1, _r_max(p, n_max)) + 2
    g = weak_form_g(n_max * p + 2, ZpRing(p, K))
    seq = CoeffSeq.from_series(g.truncate(n_max * p + 1), "g")
    tau = delta_int(max(p, hecke_n) * p + 2)
    spec = CongruenceSpec.three_term(p, tau[p], p ** 11, 12, "weak", label="g weak", notes={"tau_p": tau[p]})
    cell.reports.append(check(seq, spec, n_max * p, middles=range(1, n_max + 1), suite=cell.suite))
    exact = weak_form_g(4)
    got = {n: int(exact[n]) for n in G_VERIFIED}
    cell.checks["g coefficients (independent oracle)"] = got == G_VERIFIED
    cell.findings["g coefficients"] = got
    cell.findings["reference g coefficients reproduced"] = got == G_REFERENCE
    hk = hecke_recursion_check(tau, p, 12, 1, hecke_n)
    cell.checks[f"Delta Hecke recursion n <= {hecke_n}"] = hk.passed
    return cell


def delta_hecke(primes=(2, 3, 5, 7, 11, 13), n_max: int = 2000) -> dict:
    tau = delta_int(n_max * max(primes) + 2)
    return {p: hecke_recursion_check(tau, p, 12, 1, n_max).passed for p in primes}


# -- elliptic curves --------------------------------------------------------------

ASD_EC_CURVES = (CurveSpec.short_weierstrass(1, 0), CurveSpec.legendre(-1), CurveSpec.legendre(2))


def asd_ec(p: int, n_max: int = 400, honda: bool = True) -> SuiteCell:
    if p <= 3 or not is_prime(p):
        raise InadmissiblePrime(f"asd-ec needs a prime p > 3, got {p}")
    cell = SuiteCell("asd-ec", p)
    for curve in ASD_EC_CURVES:
        if not curve.has_good_reduction(p):
            cell.findings[str(curve)] = "bad reduction"
            continue
        cell.reports.append(asd_ec_check(curve, p, n_max))
    if honda:
        h = honda_transfer(ASD_EC_CURVES[0], p, 2)
        cell.checks["Honda transfer depth 2"] = h.passed
        cell.findings["honda"] = h.to_json()
    return cell


# -- Atkin ----------------------------------------------------------------------

ATKIN_PRIMES = (5, 7, 11)


def atkin_j(p: int, m_max: int = 2, n_count: int = 20) -> SuiteCell:
    """c(n p^m) of j == 0 mod p^m (p = 5, 7, 11); at p = 13 the t_m conjecture, report-only."""
    if p == 13:
        return atkin_conjecture(m_max, n_count)
    if p not in ATKIN_PRIMES:
        raise InadmissiblePrime(f"atkin-j runs at p in {ATKIN_PRIMES} or 13, got {p}")
    cell = SuiteCell("atkin-j", p)
    top = n_count * p ** m_max
    j = j_invariant(top + 2, ZpRing(p, m_max + 4))
    rep = CongruenceReport({"label": "c(n p^m)(j)", "p": p, "modulus": "p^m"}, suite=cell.suite)
    for m in range(1, m_max + 1):
        for n in range(1, n_count + 1):
            c = j[n * p ** m]
            v = c.valuation() if c else c.ring.N
            rep.verdicts.append(Verdict([m, n], m, v, v >= m, not c))
    cell.reports.append(rep)
    return cell


def atkin_conjecture(m_max: int = 2, n_count: int = 10, ells=(2, 3, 5, 7)) -> SuiteCell:
    p = 13
    cell = SuiteCell("atkin-j", p)
    prec = m_max + 6
    top = n_count * max(max(ells), p) * p ** m_max
    j = j_invariant(top + 2, ZpRing(p, prec))
    seq = CoeffSeq.from_series(j.truncate(top + 1), "j")
    for m in range(1, m_max + 1):
        ring = ZpRing(p, prec)
        t = tm_ratios(seq, p, m, top // p ** m, ring)

        def T(x):
            if isinstance(x, Fraction) and x.denominator != 1:
                return ring.zero
            return t[int(x) - 1]

        rep = CongruenceReport({"label": f"t_{m} Hecke-like relations", "p": p, "m": m, "modulus": f"13^{m}"},
                               suite=cell.suite, conjectural=True)
        for ell in ells:
            inv = ring.inv(ring.coerce(ell))
            for n in range(1, n_count + 1):
                lhs = T(ell * n) - T(n) * T(ell) + inv * T(Fraction(n, ell))
                v = lhs.valuation() if lhs else ring.N
                rep.verdicts.append(Verdict([ell, n], m, v, v >= m, not lhs))
        for n in range(1, n_count + 1):
            lhs = T(p * n) - T(n) * T(p)
            v = lhs.valuation() if lhs else ring.N
            rep.verdicts.append(Verdict([p, n], m, v, v >= m, not lhs))
        cell.reports.append(rep)
    # a 2-term law must survive the passage to t_m ratios
    fa = CoeffSeq.from_list([fermat_a(n) for n in range(p ** 2 * 10 + 1)], name="Fermat cubic a_n")
    cell.reports.append(tm_two_term_check(fa, p, 1, 10))
    return cell


# -- registry --------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteInfo:
    name: str
    run: object
    default_primes: tuple
    uses_nmax: bool = True
    description: str = ""


SUITES = {
    "gamma15-sqrt": SuiteInfo("gamma15-sqrt", gamma15_sqrt, (7, 11, 13, 17, 19), True, "sqrt(E1E2), 3-term mod p^(2r)"),
    "thm14": SuiteInfo("thm14", thm14, (5, 7, 11, 13), True, "g1 +- i g2 on the index-3 subgroup"),
    "thm15": SuiteInfo("thm15", thm15, (3, 7, 11, 13, 17, 23, 29, 41), True, "h1, h3 bases by p mod 8"),
    "kibelbek": SuiteInfo("kibelbek", kibelbek, (3, 7), False, "genus 2, y^2 = x^5 + 2"),
    "ks-example": SuiteInfo("ks-example", ks_example, (11, 13), False, "weakly holomorphic g at weight 12"),
    "asd-ec": SuiteInfo("asd-ec", asd_ec, (5, 7, 11, 13), True, "elliptic formal logarithms"),
    "atkin-j": SuiteInfo("atkin-j", atkin_j, (5, 7, 11, 13), False, "U_p congruences of j"),
}


def admissible(name: str, p: int) -> bool:
    checks = {
        "gamma15-sqrt": lambda q: q > 3,
        "thm14": lambda q: q > 3,
        "thm15": lambda q: q % 2 == 1 and q != 5,
        "kibelbek": lambda q: q % 5 in (2, 3) and q != 2,
        "ks-example": lambda q: q >= 11,
        "asd-ec": lambda q: q > 3,
        "atkin-j": lambda q: q in ATKIN_PRIMES or q == 13,
    }
    return is_prime(p) and checks[name](p)


def run_cell(name: str, p: int, n_max: int | None = None) -> SuiteCell:
    """One (suite, prime) task; top-level so process pools can pickle it."""
    info = SUITES[name]
    start = time.perf_counter()
    if info.uses_nmax and n_max is not None:
        cell = info.run(p, n_max)
    else:
        cell = info.run(p)
    cell.elapsed = time.perf_counter() - start
    return cell


# -- weight-1 slot ----------------------------------------------------------------

def conjecture2_check(f: CoeffSeq, m_max: int = 2, n_count: int = 10, p: int = 5) -> CongruenceReport:
    """t_m(f, 5n) == t_m(f, n) mod 5^(2m+4) for odd n, on a user-supplied f.

    No expansion of the weight-1 generators ships with the package; pass the
    coefficients of sqrt(f1 f2) on its integral grid.  Report-only.
    """
    rep = CongruenceReport({"label": "t_m(f, 5n) vs t_m(f, n)", "p": p, "modulus": "5^(2m+4)"},
                           suite="conjecture2", conjectural=True)
    for m in range(1, m_max + 1):
        t = tm_ratios(f, p, m, p * n_count)
        for n in range(1, n_count + 1, 2):
            v = vp(t[p * n - 1] - t[n - 1], p)
            rep.verdicts.append(Verdict([m, n], 2 * m + 4, v, v >= 2 * m + 4))
    return rep


# -- runner ------------------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    cells: list
    skipped: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)

    @property
    def reports(self) -> list:
        return [r for c in self.cells for r in c.reports]

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "skipped_primes": self.skipped,
            "cells": [c.to_json() for c in self.cells],
        }


def max_workers(requested: int | None = None) -> int:
    import os

    cap = os.environ.get("ASD_FORGE_THREADS")
    n = requested or os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def run_suite(name: str, primes=None, n_max: int | None = None, workers: int | None = None) -> SuiteResult:
    """Run every admissible prime; inadmissible ones are listed, not run.

    Cells may run in parallel; results come back in prime order regardless.
    """
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    primes = sorted(set(primes or SUITES[name].default_primes))
    good = [p for p in primes if admissible(name, p)]
    skipped = [p for p in primes if p not in good]
    start = time.perf_counter()
    n = min(max_workers(workers), len(good)) if good else 1
    if n > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(n) as pool:
            cells = list(pool.map(run_cell, [name] * len(good), good, [n_max] * len(good)))
    else:
        cells = [run_cell(name, p, n_max) for p in good]
    return SuiteResult(name, cells, skipped, time.perf_counter() - start)

"""Declarative checking of ASD-type congruences on coefficient sequences.

A congruence of length L + 1 is written around a middle index M:

    sum_j C_j * a(M * p^(top - j)) == 0  mod p^e(M),     j = 0..L

with ``top = L // 2`` by default, so the 3-term law reads
a(Mp) + C_1 a(M) + C_2 a(M/p).  Indices that are not integers give 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable

from ..numfield import PadicEmbedding, QuadraticNumber
from ..padic import PadicInt, QuadElt, ZpRing, vp
from ..series import PuiseuxSeries

INF = float("inf")


class InsufficientData(ValueError):
    pass


class DegenerateData(ValueError):
    pass


# -- sequences ----------------------------------------------------------

@dataclass(frozen=True)
class CoeffSeq:
    """a_n on an index grid; ``values[i]`` is a_(start + i)."""

    values: tuple
    start: int = 0
    ram: int = 1
    name: str = ""

    @classmethod
    def from_series(cls, s: PuiseuxSeries, name: str = "") -> CoeffSeq:
        """Index n stands for the exponent n / ram."""
        if s.prec is None:
            raise ValueError("exact series have no finite coefficient range; truncate first")
        return cls(tuple(s.coefficients(s.offset, s.prec)), s.offset, s.ram, name)

    @classmethod
    def from_list(cls, values, start: int = 0, name: str = "") -> CoeffSeq:
        return cls(tuple(values), start, 1, name)

    @property
    def top(self) -> int:
        """Largest index with a known coefficient."""
        return self.start + len(self.values) - 1

    def __getitem__(self, n):
        if isinstance(n, Fraction):
            if n.denominator != 1:
                return 0
            n = int(n)
        if n < self.start:
            # below the leading term of a series everything is zero
            return 0
        if n > self.top:
            raise InsufficientData(f"{self.name or 'sequence'}: index {n} beyond computed range {self.top}")
        return self.values[n - self.start]

    def at(self, num: int, den: int = 1):
        """a_(num/den) with a_x = 0 for non-integral x."""
        if num % den:
            return 0
        return self[num // den]

    def map(self, fn) -> CoeffSeq:
        return CoeffSeq(tuple(fn(v) for v in self.values), self.start, self.ram, self.name)

    def __add__(self, other: CoeffSeq) -> CoeffSeq:
        return self._combine(other, 1)

    def __sub__(self, other: CoeffSeq) -> CoeffSeq:
        return self._combine(other, -1)

    def _combine(self, other, sign):
        if other.ram != self.ram:
            raise ValueError("sequences on different grids")
        lo = min(self.start, other.start)
        hi = min(self.top, other.top)
        vals = tuple(self[n] + sign * other[n] for n in range(lo, hi + 1))
        return CoeffSeq(vals, lo, self.ram, self.name)

    def scale(self, c) -> CoeffSeq:
        return self.map(lambda v: c * v)


# -- specs ---------------------------------------------------------------

Law = Callable[[int], int]


def _ord(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass
class CongruenceSpec:
    p: int
    coeffs: tuple
    k: int = 2
    law: str | Law = "scholl"
    top: int | None = None
    label: str = ""
    conjectural: bool = False
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = tuple(self.coeffs)
        if not self.coeffs:
            raise ValueError("empty coefficient list")
        if self.top is None:
            self.top = (len(self.coeffs) - 1) // 2
        if isinstance(self.law, str) and self.law not in ("scholl", "weak"):
            raise ValueError(f"unknown modulus law {self.law!r}")

    @classmethod
    def three_term(cls, p, A, B, k, law="scholl", **kw) -> CongruenceSpec:
        """a_(np) - A a_n + B a_(n/p)."""
        return cls(p, (1, -A, B), k, law, **kw)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def exponent(self, M: int) -> int:
        if callable(self.law):
            e = self.law(M)
        elif self.law == "scholl":
            e = (self.k - 1) * (1 + _ord(M, self.p))
        else:
            e = (self.k - 1) * _ord(M, self.p)
        if e < 0:
            raise ValueError(f"modulus law returned a negative exponent at {M}")
        return e

    def indices(self, M: int) -> list[tuple[int, int]]:
        """(numerator, denominator) of each index M p^(top - j)."""
        p = self.p
        out = []
        for j in range(self.order):
            s = self.top - j
            out.append((M * p ** s, 1) if s >= 0 else (M, p ** (-s)))
        return out

    def to_json(self) -> dict:
        law = self.law if isinstance(self.law, str) else getattr(self.law, "__name__", "custom")
        return {
            "label": self.label,
            "p": self.p,
            "order": self.order,
            "weight": self.k,
            "law": law,
            "coefficients": [_json_value(c) for c in self.coeffs],
            "conjectural": self.conjectural,
            **({"notes": self.notes} if self.notes else {}),
        }


def _json_value(x):
    if isinstance(x, (PadicInt, QuadElt)):
        return x.to_json()
    if isinstance(x, (int, Fraction, QuadraticNumber)):
        return str(x)
    return str(x)


# -- reports ------------------------------------------------------------

@dataclass
class Verdict:
    n: object
    required: int
    achieved: float
    passed: bool
    capped: bool = False

    def to_json(self) -> dict:
        ach = "inf" if self.achieved == INF else int(self.achieved)
        out = {"n": self.n, "required_valuation": self.required, "achieved_valuation": ach, "pass": self.passed}
        if self.capped:
            out["capped"] = True
        return out


@dataclass
class CongruenceReport:
    spec: dict
    verdicts: list = field(default_factory=list)
    suite: str = ""
    conjectural: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def first_failure(self):
        return next((v for v in self.verdicts if not v.passed), None)

    @property
    def summary(self) -> dict:
        n_pass = sum(v.passed for v in self.verdicts)
        first = self.first_failure
        return {
            "checked": len(self.verdicts),
            "passed": n_pass,
            "failed": len(self.verdicts) - n_pass,
            "first_failure": None if first is None else first.n,
        }

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "prime": self.spec.get("p"),
            "spec": self.spec,
            "verdicts": [v.to_json() for v in self.verdicts],
            "summary": self.summary,
            "conjectural": self.conjectural,
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    def line(self) -> str:
        s = self.summary
        status = "PASS" if self.passed else ("FINDING" if self.conjectural else "FAIL")
        label = self.spec.get("label") or self.suite
        return f"{status} {label} p={self.spec.get('p')} checked={s['checked']} failed={s['failed']}"


# -- valuations ---------------------------------------------------------

def _is_exact(x) -> bool:
    return isinstance(x, (int, Rational)) or (isinstance(x, QuadraticNumber) and not x.b)


def _exact(x) -> Fraction:
    return x.a if isinstance(x, QuadraticNumber) else Fraction(x)


def padic_valuation(x, p: int) -> float:
    """Valuation of an exact rational (inf at 0) or a capped p-adic element."""
    if isinstance(x, (PadicInt, QuadElt)):
        return INF if not x else x.valuation()
    if _is_exact(x):
        return vp(_exact(x), p)
    raise TypeError(f"no valuation for {x!r} without an embedding")


class _Evaluator:
    """Sums terms exactly when possible, else inside a p-adic ring."""

    def __init__(self, p: int, precision: int, embedding: PadicEmbedding | None):
        self.p = p
        self.precision = precision
        self.embedding = embedding

    def _embed(self, x):
        if self.embedding is None:
            self.embedding = PadicEmbedding(self.p, self.precision)
        return self.embedding(x)

    def valuation(self, terms) -> tuple[float, bool]:
        if all(_is_exact(c) and _is_exact(a) for c, a in terms):
            s = sum((_exact(c) * _exact(a) for c, a in terms), Fraction(0))
            return vp(s, self.p), False
        if self.embedding is None and all(_is_exact(c) and (_is_exact(a) or isinstance(a, PadicInt)) for c, a in terms):
            # values already reduced mod p^K: stay in their ring
            ring = next(a.ring for _, a in terms if isinstance(a, PadicInt))
            s = ring.zero
            for c, a in terms:
                s = s + ring.coerce(_exact(c)) * ring.coerce(a if isinstance(a, PadicInt) else _exact(a))
            if not s:
                return ring.N, True
            return s.valuation(), False
        s = None
        for c, a in terms:
            if _is_exact(a) and _exact(a) == 0:
                continue
            t = self._embed(c) * self._embed(a)
            s = t if s is None else s + t
        if s is None or not s:
            cap = s.ring.N if s is not None else INF
            return cap, s is not None
        v = s.valuation()
        return v, v >= s.ring.N


def check(seq: CoeffSeq, spec: CongruenceSpec, n_max: int, embedding: PadicEmbedding | None = None,
          middles=None, suite: str = "") -> CongruenceReport:
    """Verdict at every middle index M whose largest index M p^top is at most n_max."""
    p = spec.p
    top_factor = p ** spec.top
    if middles is None:
        middles = range(1, n_max // top_factor + 1)
    middles = list(middles)
    if middles and max(middles) * top_factor > seq.top:
        raise InsufficientData(f"need a_n up to {max(middles) * top_factor}, have {seq.top}")
    needed = max((spec.exponent(M) for M in middles), default=1)
    if embedding is not None:
        needed = embedding.N
    ev = _Evaluator(p, needed + 4, embedding)
    report = CongruenceReport(spec.to_json(), suite=suite, conjectural=spec.conjectural)
    for M in middles:
        e = spec.exponent(M)
        terms = [(c, seq.at(num, den)) for c, (num, den) in zip(spec.coeffs, spec.indices(M))]
        v, capped = ev.valuation(terms)
        report.verdicts.append(Verdict(M, e, v, v >= e, capped))
    return report


# -- solving for A_p ---------------------------------------------------

@dataclass
class Condition:
    """a * A == c mod p^e."""

    n: int
    a: object
    c: object
    e: int

    def to_json(self) -> dict:
        return {"n": self.n, "a": _json_value(self.a), "c": _json_value(self.c), "e": self.e}


@dataclass
class Refutation:
    p: int
    conditions: list
    reason: str

    def reverify(self) -> bool:
        """Independent re-check that no A satisfies the listed conditions."""
        if len(self.conditions) == 1:
            cond = self.conditions[0]
            return _val(cond.a, self.p) >= cond.e and _val(cond.c, self.p) < cond.e
        c1, c2 = self.conditions
        va1 = _val(c1.a, self.p)
        if va1 >= c1.e or _val(c1.c, self.p) < va1:
            return False
        # A is pinned modulo p^(e1 - va1) by the first condition
        A0 = _quotient(c1.c, c1.a, self.p)
        slack = c1.e - va1
        return _val(c2.a, self.p) + slack >= c2.e and _val(c2.a * A0 - c2.c, self.p) < c2.e

    def to_json(self) -> dict:
        return {"reason": self.reason, "conditions": [c.to_json() for c in self.conditions], "reverified": self.reverify()}


@dataclass
class APSolution:
    p: int
    value: object | None
    precision: int
    refutation: Refutation | None = None
    conditions: int = 0

    @property
    def solved(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        out = {"p": self.p, "solved": self.solved, "precision": self.precision, "conditions": self.conditions}
        if self.value is not None:
            out["A_p"] = _json_value(self.value)
        if self.refutation is not None:
            out["refutation"] = self.refutation.to_json()
        return out


def _val(x, p):
    return padic_valuation(x, p)


def _quotient(c, a, p):
    """c / a where v(a) <= v(c), as an element of a's ring."""
    s = _val(a, p)
    ring = a.ring
    base = getattr(ring, "base", ring)
    pe = p ** s
    if isinstance(a, QuadElt):
        au = type(a)(ring, a.a // pe, a.b // pe)
        cu = type(c)(ring, c.a // pe, c.b // pe)
    else:
        au = PadicInt(base, a.v // pe)
        cu = PadicInt(base, c.v // pe)
    return cu * ring.inv(au)


def solve_ap(seq: CoeffSeq, p: int, k: int, B, r_max: int, n_max: int | None = None,
             embedding: PadicEmbedding | None = None) -> APSolution:
    """Find A with a(Mp) - A a(M) + B a(M/p) == 0 mod p^((k-1)(1+ord_p M)) for all M.

    Returns the value modulo the best achievable power of p, or a
    refutation certificate when the conditions are inconsistent.
    """
    target = (k - 1) * r_max
    if n_max is None:
        n_max = seq.top
    prec = target + 6
    emb = embedding or PadicEmbedding(p, prec)
    P = emb.N
    conds = []
    for M in range(1, n_max // p + 1):
        e = min((k - 1) * (1 + _ord(M, p)), P - 1)
        a = emb(seq.at(M))
        c = emb(seq.at(M * p)) + emb(B) * emb(seq.at(M, p))
        conds.append(Condition(M, a, c, e))
    if not conds:
        raise InsufficientData("no conditions: sequence too short")
    # lift every element into one ring (the embedding may have switched to the extension)
    ring = emb.ring
    for cnd in conds:
        cnd.a, cnd.c = ring.coerce(cnd.a), ring.coerce(cnd.c)
    best = None
    for cnd in conds:
        va = _val(cnd.a, p)
        if va < cnd.e:
            if _val(cnd.c, p) < va:
                return APSolution(p, None, 0, Refutation(p, [cnd], "a_n A cannot reach the valuation of the other terms"), len(conds))
            if best is None or cnd.e - va > best[1]:
                best = (cnd, cnd.e - va)
    if best is None:
        for cnd in conds:
            if _val(cnd.c, p) < cnd.e:
                return APSolution(p, None, 0, Refutation(p, [cnd], "condition independent of A_p fails"), len(conds))
        raise DegenerateData("all tested a_n vanish to the required precision")
    anchor, precision = best
    A0 = _quotient(anchor.c, anchor.a, p)
    for cnd in conds:
        if _val(cnd.a * A0 - cnd.c, p) < cnd.e:
            if _val(cnd.a, p) >= cnd.e:
                return APSolution(p, None, 0, Refutation(p, [cnd], "condition independent of A_p fails"), len(conds))
            return APSolution(p, None, 0, Refutation(p, [anchor, cnd], "two conditions pin A_p to different classes"), len(conds))
    return APSolution(p, A0, precision, None, len(conds))


# -- Atkin-style ratios ------------------------------------------------

def tm_ratios(seq: CoeffSeq, p: int, m: int, n_max: int, ring: ZpRing | None = None) -> list:
    """t_m(f, n) = c(n p^m) / c(p^m) for n = 1..n_max (exact, or in ``ring``)."""
    pivot = seq[p ** m]
    if pivot == 0 or (ring is not None and not ring.coerce(pivot)):
        raise ZeroDivisionError(f"c({p}^{m}) vanishes")
    if ring is None:
        return [Fraction(seq[n * p ** m]) / Fraction(pivot) for n in range(1, n_max + 1)]
    inv = ring.inv(ring.coerce(pivot))
    return [ring.coerce(seq[n * p ** m]) * inv for n in range(1, n_max + 1)]


def tm_two_term_check(seq: CoeffSeq, p: int, m: int, n_max: int) -> CongruenceReport:
    """t_m(f, pn) == t_m(f, n) t_m(f, p) mod p^(m+1)."""
    t = tm_ratios(seq, p, m, n_max * p)
    spec = {"label": f"t_{m} two-term translation", "p": p, "m": m, "law": f"p^{m + 1}"}
    rep = CongruenceReport(spec)
    for n in range(1, n_max + 1):
        diff = t[p * n - 1] - t[n - 1] * t[p - 1]
        v = vp(diff, p)
        rep.verdicts.append(Verdict(n, m + 1, v, v >= m + 1))
    return rep

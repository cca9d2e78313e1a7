"""Frobenius solutions of second-order Fuchsian ODEs, mirror maps and the
Gamma^1(5) bootstrap.

An ODE is ``P2(t) F'' + P1(t) F' + P0(t) F = 0`` with polynomial
coefficients over Q.  Writing ``P2 = sum al_i t^i`` (and likewise be_i,
ga_i), the operator sends t^s to ``sum_j Q_j(s) t^(s+j-2)`` with
``Q_j(s) = al_j s(s-1) + be_(j-1) s + ga_(j-2)``; the lowest nonzero
``Q_j0`` is the indicial polynomial.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .series import QQ, PuiseuxSeries


class ODEError(ValueError):
    """Raised on obstructions or malformed equations."""


def _poly(coeffs) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _get(poly, i):
    return poly[i] if 0 <= i < len(poly) else Fraction(0)


@dataclass(frozen=True)
class FuchsianODE2:
    P2: tuple
    P1: tuple
    P0: tuple

    def __post_init__(self):
        object.__setattr__(self, "P2", _poly(self.P2))
        object.__setattr__(self, "P1", _poly(self.P1))
        object.__setattr__(self, "P0", _poly(self.P0))
        if not self.P2:
            raise ODEError("leading coefficient P2 vanishes: not a second-order equation")

    @classmethod
    def zagier(cls, a, b, lam) -> FuchsianODE2:
        """(t(t^2 + a t + b) F')' + (t - lam) F = 0."""
        a, b, lam = Fraction(a), Fraction(b), Fraction(lam)
        return cls((0, b, a, 1), (b, 2 * a, 3), (-lam, 1))

    @classmethod
    def hypergeometric(cls, a, b, c) -> FuchsianODE2:
        """t(1-t)F'' + (c - (a+b+1)t)F' - ab F = 0."""
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        return cls((0, 1, -1), (c, -(a + b + 1)), (-a * b,))

    @property
    def shifts(self) -> range:
        top = max(len(self.P2), len(self.P1) + 1, len(self.P0) + 2)
        return range(0, top)

    def Q(self, j: int, s) -> Fraction:
        return _get(self.P2, j) * s * (s - 1) + _get(self.P1, j - 1) * s + _get(self.P0, j - 2)

    @property
    def j0(self) -> int:
        for j in self.shifts:
            if any(self.Q(j, s) for s in range(3)):
                return j
        raise ODEError("operator vanishes identically")

    def indicial_roots(self) -> tuple:
        """Roots of the indicial polynomial c2 s^2 + c1 s + c0 (only rational cases)."""
        j = self.j0
        c0 = self.Q(j, 0)
        c2 = (self.Q(j, 2) - 2 * self.Q(j, 1) + c0) / 2
        c1 = self.Q(j, 1) - c0 - c2
        if c2 == 0:
            return (-c0 / c1,) if c1 else ()
        disc = c1 * c1 - 4 * c2 * c0
        r = QQ.nth_root(disc, 2) if disc >= 0 else None
        if r is None:
            raise ODEError("irrational indicial roots")
        return tuple(sorted({(-c1 - r) / (2 * c2), (-c1 + r) / (2 * c2)}))

    def is_mum(self) -> bool:
        """Maximal unipotent monodromy at 0: indicial roots {0, 0}."""
        try:
            j = self.j0
            # indicial polynomial c s^2: Q(0) = 0, Q(2) = 4 Q(1) != 0
            return self.Q(j, 0) == 0 and self.Q(j, 1) != 0 and self.Q(j, 2) == 4 * self.Q(j, 1)
        except ODEError:
            return False

    def apply(self, F: PuiseuxSeries) -> PuiseuxSeries:
        """L(F) for a power series F in t; exact up to F's precision minus 2."""
        d1 = F.derivative()
        d2 = d1.derivative()
        P2 = PuiseuxSeries(self.P2)
        P1 = PuiseuxSeries(self.P1)
        P0 = PuiseuxSeries(self.P0)
        return P2 * d2 + P1 * d1 + P0 * F


def _solve_recurrence(ode: FuchsianODE2, N: int, u0, rhs=None) -> list:
    """Coefficients u_0..u_(N-1) with L(sum u_n t^n) = rhs (index m + j0 - 2)."""
    j0 = ode.j0
    shifts = [j for j in ode.shifts if j > j0]
    # Q_j(s) are quadratic in s: tabulate per shift for speed
    u = [Fraction(u0)]
    for m in range(1, N):
        lead = ode.Q(j0, m)
        acc = Fraction(0)
        for j in shifts:
            k = m - j + j0
            if 0 <= k < len(u) and u[k]:
                acc += ode.Q(j, k) * u[k]
        target = rhs(m + j0 - 2) if rhs is not None else 0
        if lead == 0:
            if acc != target:
                raise ODEError(f"resonant obstruction at index {m}")
            u.append(Fraction(0))
        else:
            u.append((target - acc) / lead)
    return u


def holomorphic_solution(ode: FuchsianODE2, N: int) -> PuiseuxSeries:
    """The power-series solution F = 1 + O(t), to order N."""
    roots = ode.indicial_roots()
    if 0 not in roots:
        raise ODEError(f"0 is not an indicial root (roots {roots})")
    return PuiseuxSeries(_solve_recurrence(ode, N, 1), prec=N)


def log_companion(ode: FuchsianODE2, F: PuiseuxSeries, N: int) -> PuiseuxSeries:
    """G with G(0) = 0 so that F log t + G solves the ODE, to order N."""
    if not ode.is_mum():
        raise ODEError("log companion needs a double indicial root at 0")
    if F.prec is None or F.prec < N + 2:
        F = holomorphic_solution(ode, N + 2)
    # L(F log t) = log t L(F) + P2 (2F'/t - F/t^2) + P1 F/t
    Fx = F.truncate(N + 2)
    P2 = PuiseuxSeries(ode.P2)
    P1 = PuiseuxSeries(ode.P1)
    extra = P2 * (Fx.derivative().shift(-1).scale(2) - Fx.shift(-2)) + P1 * Fx.shift(-1)

    def rhs(i):
        return -extra.coeff(i) if i < extra.prec else Fraction(0)

    g = _solve_recurrence(ode, N, 0, rhs)
    return PuiseuxSeries(g, prec=N)


@dataclass
class FrobeniusBasis:
    ode: FuchsianODE2
    F: PuiseuxSeries
    G: PuiseuxSeries

    @classmethod
    def compute(cls, ode: FuchsianODE2, N: int) -> FrobeniusBasis:
        F = holomorphic_solution(ode, N + 2)
        G = log_companion(ode, F, N)
        return cls(ode, F.truncate(N), G)


def mirror_map(basis: FrobeniusBasis, N: int, scale=1) -> tuple[PuiseuxSeries, PuiseuxSeries]:
    """(q(t), t(q)) with q = scale * t * exp(G/F); t(q) is normalised by the same scale."""
    F = basis.F.truncate(N)
    G = basis.G.truncate(N)
    q_of_t = (G / F).exp().shift(1).truncate(N)
    t_of_q = q_of_t.revert()
    if scale != 1:
        scale = Fraction(scale)
        q_of_t = q_of_t.scale(scale)
        # t(q) = T(q/scale)
        t_of_q = PuiseuxSeries(
            [c / scale ** (t_of_q.offset + i) for i, c in enumerate(t_of_q.coeffs)],
            t_of_q.offset, 1, t_of_q.prec,
        )
    return q_of_t, t_of_q


# -- Gamma^1(5) -----------------------------------------------------------

#: The Apery-like equation whose holomorphic solution is sum A(n) t^n with
#: A(n) = sum_k binom(n,k)^2 binom(n+k,k).
GAMMA15_ODE = FuchsianODE2.zagier(11, -1, -3)
#: The same equation with t replaced by -t.
GAMMA15_ODE_NEG = FuchsianODE2.zagier(-11, -1, 3)

GAMMA15_CHECKS = {
    "E1": {0: 1, 1: -2, 2: -6, 3: 7, 4: 26},
    "E2": {1: 1, 2: -7, 3: 19, 4: -23},
    "f": {1: 1, 3: Fraction(-9, 2), 5: Fraction(27, 8), 7: Fraction(147, 16)},
}


class ValidationError(AssertionError):
    pass


@dataclass
class Gamma15Bundle:
    """t, E1, E2 on the q^(1/5) grid; f on q^(1/10); g1, g2 on q^(1/15); h1, h3 on q^(1/20)."""

    order: int
    t: PuiseuxSeries
    E1: PuiseuxSeries
    E2: PuiseuxSeries
    f: PuiseuxSeries
    g1: PuiseuxSeries
    g2: PuiseuxSeries
    h1: PuiseuxSeries
    h3: PuiseuxSeries
    A: PuiseuxSeries
    elapsed: float = 0.0
    checks: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("t", "E1", "E2", "f", "g1", "g2", "h1", "h3")}


def _validate(name, series, expected):
    diffs = []
    for idx, val in expected.items():
        got = series.coeff(idx)
        if got != val:
            diffs.append(f"{name}[{idx}/{series.ram}] = {got}, expected {val}")
    if diffs:
        raise ValidationError("; ".join(diffs))


def gamma15_pipeline(N: int = 200, validate: bool = True) -> Gamma15Bundle:
    """Bootstrap the Gamma^1(5) forms from the ODE and its mirror map.

    N is the order in q5 = q^(1/5): t, E1, E2 are exact for exponents < N/5.
    """
    if N < 40:
        raise ValueError("pipeline order must be at least 40")
    start = time.perf_counter()
    basis = FrobeniusBasis.compute(GAMMA15_ODE, N + 1)
    _, t_q = mirror_map(basis, N + 1)  # t(q5), valuation 1
    # E1 = F(t) * (q5/t) * dt/dq5
    Ft = basis.F.truncate(N).compose(t_q.truncate(N + 1))
    E1 = (Ft * t_q.derivative() / t_q.shift(-1)).truncate(N)
    E1 = PuiseuxSeries(E1.coefficients(0, N), 0, 5, N)
    t = PuiseuxSeries(t_q.coefficients(1, N + 1), 1, 5, N + 1)
    E2 = (E1 * t).truncate(N)
    f = (E1 * t.nth_root(2)).truncate(2 * N)
    t3 = t.nth_root(3)
    g1 = (E1 * t3).truncate(3 * N)
    g2 = (E1 * t3 * t3).truncate(3 * N)
    t4 = t.nth_root(4)
    h1 = (E1 * t4).truncate(4 * N)
    h3 = (E1 * t4 * t4 * t4).truncate(4 * N)
    bundle = Gamma15Bundle(N, t, E1, E2, f, g1, g2, h1, h3, basis.F, time.perf_counter() - start)
    if validate:
        for name, exp in GAMMA15_CHECKS.items():
            _validate(name, getattr(bundle, name), exp)
        bundle.checks = {name: True for name in GAMMA15_CHECKS}
    return bundle


# -- Zagier scan -----------------------------------------------------------

@dataclass
class ZagierResult:
    a: Fraction
    b: Fraction
    lam: Fraction
    order: int
    integral: bool
    first_failure: int | None
    coefficients: list


def zagier_scan(a, b, lam, N: int) -> ZagierResult:
    """Run b(n+1)^2 u_(n+1) + (a n(n+1) - lam) u_n + n^2 u_(n-1) = 0 from u_0 = 1."""
    a, b, lam = Fraction(a), Fraction(b), Fraction(lam)
    if b == 0:
        raise ODEError("b = 0: the recursion's leading coefficient vanishes (non-generic)")
    u = [Fraction(1)]
    prev = Fraction(0)
    first = None
    for n in range(0, N - 1):
        nxt = -((a * n * (n + 1) - lam) * u[n] + n * n * prev) / (b * (n + 1) ** 2)
        prev = u[n]
        u.append(nxt)
        if first is None and nxt.denominator != 1:
            first = n + 1
    return ZagierResult(a, b, lam, N, first is None, first, u)


def apery_like(n: int) -> int:
    """A(n) = sum_k binom(n,k)^2 binom(n+k,k)."""
    from math import comb

    return sum(comb(n, k) ** 2 * comb(n + k, k) for k in range(n + 1))

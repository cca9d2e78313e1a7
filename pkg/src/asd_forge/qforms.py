"""q-expansions of the classical forms used by the suites.

Every generator takes an order ``N`` meaning "all exponents below q^N"
and an optional coefficient ring.  Integer-coefficient forms are built on
plain integer lists (reduced mod p^K when the ring is ``ZpRing``) and only
wrapped into a :class:`PuiseuxSeries` at the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .numfield import QuadraticField, QuadraticNumber
from .padic import ZpRing
from .series import (
    QQ,
    CoeffRing,
    PuiseuxSeries,
    int_series_mul,
    int_series_pow,
)


# -- eta quotients ----------------------------------------------------

def euler_product(n: int) -> list[int]:
    """prod_{k>=1} (1 - x^k) to n terms (pentagonal number theorem)."""
    out = [0] * n
    k = 0
    while True:
        hit = False
        for j in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2) if k else (0,):
            if j < n:
                out[j] += -1 if k % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def _modulus_of(ring: CoeffRing) -> int | None:
    return ring.modulus if isinstance(ring, ZpRing) else None


def _spread(a: list[int], step: int, n: int) -> list[int]:
    out = [0] * n
    for i, c in enumerate(a):
        j = i * step
        if j >= n:
            break
        out[j] = c
    return out


@dataclass(frozen=True)
class EtaQuotientSpec:
    """prod_d eta(d z)^(r_d); scales d may be rational (e.g. 1/2)."""

    exponents: tuple[tuple[Fraction, int], ...]

    @classmethod
    def of(cls, mapping: dict) -> EtaQuotientSpec:
        items = tuple(sorted((Fraction(d), int(r)) for d, r in mapping.items() if r))
        for d, _ in items:
            if d <= 0:
                raise ValueError("eta scales must be positive")
        return cls(items)

    @property
    def leading_exponent(self) -> Fraction:
        return sum((d * r for d, r in self.exponents), Fraction(0)) / 24

    @property
    def ramification(self) -> int:
        m = self.leading_exponent.denominator
        for d, _ in self.exponents:
            m = math.lcm(m, d.denominator)
        return m


def eta_expand_int(spec: EtaQuotientSpec, N: int, modulus: int | None = None) -> tuple[int, int, list[int]]:
    """(ramification, lead index, coefficients) with exponents below q^N."""
    m = spec.ramification
    lead = spec.leading_exponent * m
    assert lead.denominator == 1
    v = int(lead)
    n = N * m - v
    if n <= 0:
        return m, v, []
    total = [1] + [0] * (n - 1)
    for d, r in spec.exponents:
        step = int(d * m)
        base = euler_product(-(-n // step))
        factor = _spread(int_series_pow(base, r, len(base), modulus), step, n)
        total = int_series_mul(total, factor, n, modulus)
    return m, v, total


def eta_expand(spec: EtaQuotientSpec | dict, N: int, ring: CoeffRing = QQ) -> PuiseuxSeries:
    """q-expansion of an eta quotient with all exponents below q^N."""
    if isinstance(spec, dict):
        spec = EtaQuotientSpec.of(spec)
    if N < 1:
        raise ValueError("order must be positive")
    m, v, cs = eta_expand_int(spec, N, _modulus_of(ring))
    return PuiseuxSeries(cs, v, m, N * m, ring)


# -- level one ---------------------------------------------------------

def divisor_power_sums(n: int, k: int) -> list[int]:
    """sigma_k(i) for 0 <= i < n (sigma_k(0) = 0)."""
    out = [0] * n
    for d in range(1, n):
        dk = d ** k
        for j in range(d, n, d):
            out[j] += dk
    return out


def e4_int(N: int, modulus: int | None = None) -> list[int]:
    s = divisor_power_sums(N, 3)
    out = [1] + [240 * x for x in s[1:]]
    return out if modulus is None else [x % modulus for x in out]


def e4(N: int, ring: CoeffRing = QQ) -> PuiseuxSeries:
    return PuiseuxSeries(e4_int(N, _modulus_of(ring)), 0, 1, N, ring)


def delta_int(N: int, modulus: int | None = None) -> list[int]:
    """tau(n) for 0 <= n < N (tau(0) = 0)."""
    if N <= 1:
        return [0] * N
    body = int_series_pow(euler_product(N - 1), 24, N - 1, modulus)
    return [0] + body


def delta(N: int, ring: CoeffRing = QQ) -> PuiseuxSeries:
    return PuiseuxSeries(delta_int(N, _modulus_of(ring)), 0, 1, N, ring)


def _over_delta(num: list[int], N: int, modulus: int | None) -> list[int]:
    """Coefficients of num/Delta from q^-1 up to q^(N-1) (N+1 entries)."""
    n = N + 1
    inv = int_series_pow(euler_product(n), -24, n, modulus)
    return int_series_mul(num[:n], inv, n, modulus)


def j_invariant(N: int, ring: CoeffRing = QQ) -> PuiseuxSeries:
    """j = E4^3/Delta with exponents below q^N."""
    mod = _modulus_of(ring)
    e = e4_int(N + 1, mod)
    cube = int_series_pow(e, 3, N + 1, mod)
    return PuiseuxSeries(_over_delta(cube, N, mod), -1, 1, N, ring)


def weak_form_g(N: int, ring: CoeffRing = QQ) -> PuiseuxSeries:
    """g = E4^6/Delta - 1464 E4^3, a weakly holomorphic weight-12 form."""
    if N < 4:
        raise ValueError("order must be at least 4")
    mod = _modulus_of(ring)
    e = e4_int(N + 1, mod)
    cube = int_series_pow(e, 3, N + 1, mod)
    sixth = int_series_mul(cube, cube, N + 1, mod)
    main = _over_delta(sixth, N, mod)
    # main[i] is the coefficient of q^(i-1)
    out = [main[i] - (1464 * cube[i - 1] if i >= 1 else 0) for i in range(N + 1)]
    if mod is not None:
        out = [x % mod for x in out]
    return PuiseuxSeries(out, -1, 1, N, ring)


# -- theta and lambda --------------------------------------------------

LAMBDA_SPEC = EtaQuotientSpec.of({Fraction(1, 2): 8, 2: 16, 1: -24})


def theta3(N: int, ring: CoeffRing = QQ) -> PuiseuxSeries:
    """theta_3 = sum_{n in Z} q^(n^2/2), exponents below q^N."""
    prec = 2 * N
    cs = [0] * prec
    n = 0
    while n * n < prec:
        cs[n * n] += 1 if n == 0 else 2
        n += 1
    return PuiseuxSeries(cs, 0, 2, prec, ring)


def lambda_expand(N: int, ring: CoeffRing = QQ) -> PuiseuxSeries:
    """Modular lambda = 16 eta(z/2)^8 eta(2z)^16 / eta(z)^24 = 16q^(1/2) - 128q + ..."""
    return eta_expand(LAMBDA_SPEC, N, ring).scale(16)


# -- weight-3 eta forms on the q^(1/8) grid ----------------------------

ETA_FORMS = {
    "f1": {2: 12, 1: -1, 4: -5},
    "f3": {1: 5, 4: 1},
    "f5": {2: 12, 1: -5, 4: -1},
    "f7": {1: 1, 4: 5},
    "eta4_6": {4: 6},
}


def eta_form(name: str, N: int, ring: CoeffRing = QQ) -> PuiseuxSeries:
    return eta_expand(ETA_FORMS[name], N, ring)


def f_combined(N: int) -> PuiseuxSeries:
    """f1 + 4 f5 + 2 sqrt(-2) (f3 - 4 f7) over Q(sqrt -2), on the q^(1/8) grid."""
    K = QuadraticField(-2)
    f1, f3, f5, f7 = (eta_form(k, N).with_ram(8).change_ring(K) for k in ("f1", "f3", "f5", "f7"))
    s = QuadraticNumber(0, 2, -2)
    return f1 + f5.scale(4) + (f3 - f7.scale(4)).scale(s)


# -- genus-2 Kibelbek forms -------------------------------------------

def kibelbek_forms(N: int, ring: CoeffRing = QQ) -> list[PuiseuxSeries]:
    """The four differentials x^(i-1) dx/2y on y^2 = x^5 + 2 with x = -(2 lambda)^(1/5).

    Returned in s = q^(1/10) with exponents below q^N, each scaled to leading
    coefficient 1 (this absorbs the sqrt 2 of y = sqrt(2 - 2 lambda)).
    """
    lam = lambda_expand(N + 1, ring).with_ram(10)
    # 2 lambda = 32 s^5 u with u = 1 + O(s^5)
    u = lam.shift(-5).scale(ring.inv(ring.coerce(16)))
    x = u.nth_root(5).with_ram(10).shift(1).scale(-2)
    y = (1 - lam).nth_root(2).with_ram(10)
    # s dx/ds, taken on the index grid
    dx = PuiseuxSeries(
        [c * (x.offset + i) for i, c in enumerate(x.coeffs)], x.offset, x.ram, x.prec, ring
    )
    base = dx / y
    out = []
    power = PuiseuxSeries([ring.one], 0, 10, None, ring)
    for _ in range(4):
        form = (power * base).truncate(10 * N)
        lead = form.coeffs[0]
        out.append(form.scale(ring.inv(lead)))
        power = power * x
    return out


# -- registry ------------------------------------------------------------

@dataclass
class NamedForm:
    name: str
    generator: Callable[[int], PuiseuxSeries]
    validation: dict = field(default_factory=dict)  # exponent -> coefficient
    description: str = ""

    def expand(self, N: int) -> PuiseuxSeries:
        s = self.generator(N)
        for e, c in self.validation.items():
            if Fraction(e) < Fraction(s.prec, s.ram) and s[e] != c:
                raise AssertionError(f"{self.name}: coefficient at q^{e} is {s[e]}, expected {c}")
        return s


def _f_combined_gen(N):
    return f_combined(N)


REGISTRY: dict[str, NamedForm] = {
    "delta": NamedForm("delta", delta, {1: 1, 2: -24, 3: 252, 4: -1472}, "Ramanujan Delta"),
    "e4": NamedForm("e4", e4, {0: 1, 1: 240, 2: 2160}, "Eisenstein series of weight 4"),
    "j": NamedForm("j", j_invariant, {-1: 1, 0: 744, 1: 196884}, "Klein j-invariant"),
    "lambda": NamedForm("lambda", lambda_expand, {Fraction(1, 2): 16, 1: -128, Fraction(3, 2): 704, 2: -3072}, "modular lambda"),
    "theta3": NamedForm("theta3", theta3, {0: 1, Fraction(1, 2): 2, 2: 2}, "Jacobi theta_3 in q^(1/2)"),
    "eta4_6": NamedForm("eta4_6", lambda N: eta_form("eta4_6", N), {1: 1, 5: -6, 9: 9}, "eta(4z)^6"),
    "f1": NamedForm("f1", lambda N: eta_form("f1", N), {Fraction(1, 8): 1}, "eta(2z)^12/(eta(z) eta(4z)^5)"),
    "f3": NamedForm("f3", lambda N: eta_form("f3", N), {Fraction(3, 8): 1}, "eta(z)^5 eta(4z)"),
    "f5": NamedForm("f5", lambda N: eta_form("f5", N), {Fraction(5, 8): 1}, "eta(2z)^12/(eta(z)^5 eta(4z))"),
    "f7": NamedForm("f7", lambda N: eta_form("f7", N), {Fraction(7, 8): 1}, "eta(z) eta(4z)^5"),
    "f_combined": NamedForm("f_combined", _f_combined_gen, {Fraction(1, 8): 1}, "f1 + 4f5 + 2sqrt(-2)(f3 - 4f7)"),
    "g_weak": NamedForm("g_weak", weak_form_g, {-1: 1, 0: 0, 1: -142236, 2: 51123200, 3: 39826861650}, "E4^6/Delta - 1464 E4^3"),
}


def expand_named(name: str, N: int) -> PuiseuxSeries:
    try:
        form = REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown form {name!r}; choose from {', '.join(sorted(REGISTRY))}") from None
    return form.expand(N)


# -- Hecke recursion ----------------------------------------------------

@dataclass
class HeckeReport:
    p: int
    k: int
    n_max: int
    failures: list[int]

    @property
    def passed(self) -> bool:
        return not self.failures


def hecke_recursion_check(seq, p: int, k: int, chi_p, n_max: int) -> HeckeReport:
    """Exact test of a_{np} - a_p a_n + chi(p) p^(k-1) a_{n/p} = 0 for 1 <= n <= n_max.

    ``seq`` is indexable by integers (a list with a_0 in slot 0, or a callable).
    """
    get = seq if callable(seq) else seq.__getitem__
    try:
        get(n_max * p)
    except IndexError:
        raise ValueError(f"sequence too short: need index {n_max * p}") from None
    ap = get(p)
    w = chi_p * p ** (k - 1)
    failures = []
    for n in range(1, n_max + 1):
        lhs = get(n * p) - ap * get(n)
        if n % p == 0:
            lhs = lhs + w * get(n // p)
        if lhs != 0:
            failures.append(n)
    return HeckeReport(p, k, n_max, failures)


def chi_minus4(p: int) -> int:
    return 0 if p % 2 == 0 else (1 if p % 4 == 1 else -1)


def chi_minus3(p: int) -> int:
    return 0 if p % 3 == 0 else (1 if p % 3 == 1 else -1)

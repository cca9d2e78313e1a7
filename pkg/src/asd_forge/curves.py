"""Point counts and Frobenius data over F_p and F_(p^2).

Elliptic models are written as y^2 = x^3 + a2 x^2 + a4 x + a6; the
genus-2 curve is y^2 = x^5 + 2.  Counting is naive enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .padic import kronecker, non_residue, primes_in, rational_mod

MODELS = ("short-weierstrass", "legendre", "tilde", "general-cubic", "genus2-x5plus2")

#: The thirteen rational CM j-invariants with the discriminant of their order.
CM_J_INVARIANTS = {
    0: -3, 54000: -12, -12288000: -27, 1728: -4, 287496: -16, -3375: -7, 16581375: -28,
    8000: -8, -32768: -11, -884736: -19, -884736000: -43, -147197952000: -67,
    -262537412640768000: -163,
}

#: Fundamental discriminants of the imaginary quadratic fields of class number one.
CM_FIELDS = (-3, -4, -7, -8, -11, -19, -43, -67, -163)


class BadReduction(ValueError):
    pass


@dataclass(frozen=True)
class CurveSpec:
    model: str
    params: tuple = ()

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        object.__setattr__(self, "params", tuple(Fraction(x) for x in self.params))
        if self.is_elliptic and self.discriminant() == 0:
            raise ValueError(f"singular curve {self}")

    @classmethod
    def legendre(cls, lam) -> CurveSpec:
        return cls("legendre", (lam,))

    @classmethod
    def short_weierstrass(cls, A, B) -> CurveSpec:
        return cls("short-weierstrass", (A, B))

    @classmethod
    def general_cubic(cls, A, B) -> CurveSpec:
        return cls("general-cubic", (A, B))

    @classmethod
    def tilde(cls, lam) -> CurveSpec:
        return cls("tilde", (lam,))

    @classmethod
    def genus2(cls) -> CurveSpec:
        return cls("genus2-x5plus2")

    @classmethod
    def parse(cls, text: str) -> CurveSpec:
        """'legendre:2', 'short-weierstrass:1,0', 'general-cubic:4,2', 'tilde:-1', 'genus2-x5plus2'."""
        model, _, rest = text.partition(":")
        model = model.strip()
        aliases = {"weierstrass": "short-weierstrass", "sw": "short-weierstrass", "cubic": "general-cubic"}
        model = aliases.get(model, model)
        params = tuple(Fraction(x) for x in rest.split(",") if x.strip()) if rest else ()
        return cls(model, params)

    def __str__(self):
        return self.model + (":" + ",".join(str(x) for x in self.params) if self.params else "")

    @property
    def is_elliptic(self) -> bool:
        return self.model != "genus2-x5plus2"

    @property
    def genus(self) -> int:
        return 1 if self.is_elliptic else 2

    def cubic(self) -> tuple[Fraction, Fraction, Fraction]:
        """(a2, a4, a6) of y^2 = x^3 + a2 x^2 + a4 x + a6."""
        m, ps = self.model, self.params
        if m == "short-weierstrass":
            return Fraction(0), ps[0], ps[1]
        if m == "legendre":
            lam = ps[0]
            return -(1 + lam), lam, Fraction(0)
        if m == "general-cubic":
            return ps[0], ps[1], Fraction(0)
        if m == "tilde":
            c = 1 / (1 - ps[0])
            # (x - 1)(x^2 - c)
            return Fraction(-1), -c, c
        raise ValueError("genus-2 model has no cubic")

    def invariants(self) -> tuple[Fraction, Fraction]:
        """(c4, Delta) of the Weierstrass model."""
        a2, a4, a6 = self.cubic()
        b2, b4, b6 = 4 * a2, 2 * a4, 4 * a6
        b8 = 4 * a2 * a6 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        return c4, disc

    def discriminant(self) -> Fraction:
        if not self.is_elliptic:
            # disc(x^5 + 2) = 5^5 * 2^4, times the 2-power from y^2
            return Fraction(2 ** 8 * 5 ** 5 * 2 ** 4)
        return self.invariants()[1]

    def j_invariant(self) -> Fraction:
        c4, disc = self.invariants()
        return c4 ** 3 / disc

    def has_good_reduction(self, p: int) -> bool:
        if p == 2:
            return False
        for x in self.params:
            if x.denominator % p == 0:
                return False
        if self.model == "tilde" and (1 - self.params[0]).numerator % p == 0:
            return False
        d = self.discriminant()
        return d.numerator % p != 0


@dataclass
class FrobeniusData:
    curve: CurveSpec
    p: int
    counts: dict  # degree -> number of points over F_(p^degree)
    charpoly: tuple  # coefficients of T^(2g), ..., T^0
    trace: int

    @property
    def ordinary(self) -> bool:
        # p-rank is positive iff the middle coefficient (genus 2) or a_p (genus 1) is a unit
        if self.curve.genus == 1:
            return self.trace % self.p != 0
        return self.charpoly[1] % self.p != 0 or self.charpoly[2] % self.p != 0

    def to_json(self) -> dict:
        return {
            "curve": str(self.curve),
            "p": self.p,
            "counts": {str(k): v for k, v in self.counts.items()},
            "charpoly": list(self.charpoly),
            "trace": self.trace,
            "ordinary": self.ordinary,
        }


def _chi_table(p: int) -> list[int]:
    tab = [-1] * p
    tab[0] = 0
    for x in range(1, (p + 1) // 2 + 1):
        tab[x * x % p] = 1
    return tab


def _cubic_mod(curve: CurveSpec, p: int) -> tuple[int, int, int]:
    return tuple(rational_mod(c, p) for c in curve.cubic())


def count_points(curve: CurveSpec, p: int) -> FrobeniusData:
    """#E(F_p) (with the point at infinity), a_p and Frobenius charpoly."""
    if p > 10 ** 5:
        raise ValueError("naive counting budget exceeded (p > 1e5)")
    if not curve.has_good_reduction(p):
        raise BadReduction(f"{curve} has bad reduction at {p}")
    if not curve.is_elliptic:
        return genus2_charpoly(p)
    a2, a4, a6 = _cubic_mod(curve, p)
    chi = _chi_table(p)
    s = 0
    for x in range(p):
        s += chi[(((x + a2) * x + a4) * x + a6) % p]
    n = p + 1 + s
    ap = p + 1 - n
    if ap * ap > 4 * p:
        raise AssertionError(f"Hasse bound violated: a_{p} = {ap}")
    return FrobeniusData(curve, p, {1: n}, (1, -ap, p), ap)


def trace_of_frobenius(curve: CurveSpec, p: int) -> int:
    return count_points(curve, p).trace


# -- F_(p^2) -----------------------------------------------------------

class Fp2:
    """Arithmetic in F_p[u]/(u^2 - r) on pairs (a, b) = a + b u."""

    def __init__(self, p: int):
        self.p = p
        self.r = non_residue(p)

    def mul(self, x, y):
        p, r = self.p, self.r
        return ((x[0] * y[0] + r * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def add(self, x, y):
        p = self.p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def norm(self, x) -> int:
        return (x[0] * x[0] - self.r * x[1] * x[1]) % self.p

    def chi(self, x) -> int:
        """Quadratic character of F_(p^2): z is a square iff N(z) is a square in F_p."""
        if x == (0, 0):
            return 0
        n = self.norm(x)
        return 1 if pow(n, (self.p - 1) // 2, self.p) == 1 else -1

    def sqrt(self, x):
        """Some square root of x, by search (small p only)."""
        p = self.p
        for a in range(p):
            for b in range(p):
                if self.mul((a, b), (a, b)) == x:
                    return (a, b)
        return None

    def elements(self):
        p = self.p
        for a in range(p):
            for b in range(p):
                yield (a, b)


def count_points_fp2(poly: list, p: int) -> int:
    """#{y^2 = poly(x)} over F_(p^2), plus points at infinity for a monic poly of degree 3 or 5.

    ``poly`` holds F_(p^2) coefficients (pairs) from the constant term up.
    """
    F = Fp2(p)
    q = p * p
    s = 0
    for x in F.elements():
        v = (0, 0)
        for c in reversed(poly):
            v = F.add(F.mul(v, x), c)
        s += F.chi(v)
    return q + 1 + s


def genus2_charpoly(p: int) -> FrobeniusData:
    """Frobenius charpoly of y^2 = x^5 + 2 from #X(F_p) and #X(F_(p^2))."""
    if p in (2, 5):
        raise BadReduction(f"y^2 = x^5 + 2 has bad reduction at {p}")
    if p > 300:
        raise ValueError("F_(p^2) enumeration budget exceeded (p > 300)")
    chi = _chi_table(p)
    n1 = p + 1 + sum(chi[(pow(x, 5, p) + 2) % p] for x in range(p))
    poly = [(2, 0), (0, 0), (0, 0), (0, 0), (0, 0), (1, 0)]
    n2 = count_points_fp2(poly, p)
    s1 = p + 1 - n1
    s2 = p * p + 1 - n2  # sum of squares of the Frobenius roots
    e2 = (s1 * s1 - s2) // 2
    cp = (1, -s1, e2, -p * s1, p * p)
    return FrobeniusData(CurveSpec.genus2(), p, {1: n1, 2: n2}, cp, s1)


def charpoly_root_moduli(data: FrobeniusData) -> list[float]:
    """|roots| of the Frobenius charpoly (floating cross-check)."""
    import numpy as np

    return [float(abs(r)) for r in np.roots([float(c) for c in data.charpoly])]


# -- CM scan -------------------------------------------------------------

@dataclass
class CMCertificate:
    curve: CurveSpec
    j: Fraction
    discriminant: int | None
    field_discriminant: int | None
    prime_bound: int
    zero_primes: list = field(default_factory=list)
    certified: bool = False
    method: str = "a_p = 0 exactly at the inert primes of the CM field for good p <= bound, and j is a rational CM invariant"

    def to_json(self) -> dict:
        return {
            "curve": str(self.curve),
            "j": str(self.j),
            "order_discriminant": self.discriminant,
            "field_discriminant": self.field_discriminant,
            "prime_bound": self.prime_bound,
            "certified": self.certified,
            "method": self.method,
        }


def _fundamental(D: int) -> int:
    for d in CM_FIELDS:
        f2 = Fraction(D, d)
        if f2.denominator == 1 and f2 > 0:
            r = int(f2) ** 0.5
            if int(round(r)) ** 2 == int(f2):
                return d
    return D


def cm_certify(curve: CurveSpec, bound: int = 200) -> CMCertificate:
    j = curve.j_invariant()
    primes = [p for p in primes_in(5, bound) if curve.has_good_reduction(p)]
    zeros = [p for p in primes if trace_of_frobenius(curve, p) == 0]
    D = CM_J_INVARIANTS.get(j) if j.denominator == 1 else None
    cert = CMCertificate(curve, j, D, None, bound, zeros)
    for d in CM_FIELDS:
        inert = [p for p in primes if d % p != 0 and kronecker(d, p) == -1]
        testable = [p for p in primes if d % p != 0]
        if [p for p in zeros if p in testable] == inert and inert:
            cert.field_discriminant = d
            break
    cert.certified = (
        D is not None and cert.field_discriminant is not None and _fundamental(D) == cert.field_discriminant
    )
    return cert


def cm_scan(family: str, box, bound: int = 200) -> list[CMCertificate]:
    """Certify every parameter in ``box`` (an iterable of parameter tuples or scalars)."""
    out = []
    for params in box:
        if not isinstance(params, tuple):
            params = (params,)
        try:
            curve = CurveSpec(family, params)
        except (ValueError, ZeroDivisionError):
            continue
        cert = cm_certify(curve, bound)
        if cert.certified:
            out.append(cert)
    return out

"""Exact quadratic fields Q(sqrt d) and their p-adic embeddings."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .padic import PadicInt, QuadElt, UnramifiedQuad, ZpRing, legendre, sqrt_zp
from .series import QQ, CoeffRing, RationalField, register_ring_decoder


class QuadraticNumber:
    """a + b*sqrt(d) with rational a, b and a fixed squarefree d."""

    __slots__ = ("d", "a", "b")

    def __init__(self, a, b=0, d: int = -1):
        self.d = d
        self.a = Fraction(a)
        self.b = Fraction(b)

    def _other(self, o):
        if isinstance(o, QuadraticNumber):
            if o.d != self.d and o.b and self.b:
                raise ValueError(f"mixing Q(sqrt {self.d}) and Q(sqrt {o.d})")
            return o.a, o.b
        if isinstance(o, (int, Rational)):
            return Fraction(o), Fraction(0)
        raise TypeError(f"unsupported operand {o!r}")

    def _new(self, a, b, other=None):
        d = self.d
        if not self.b and isinstance(other, QuadraticNumber):
            d = other.d
        return QuadraticNumber(a, b, d)

    def __add__(self, o):
        if isinstance(o, (PadicInt, QuadElt)):
            return NotImplemented
        c, e = self._other(o)
        return self._new(self.a + c, self.b + e, o)

    __radd__ = __add__

    def __sub__(self, o):
        c, e = self._other(o)
        return self._new(self.a - c, self.b - e, o)

    def __rsub__(self, o):
        c, e = self._other(o)
        return self._new(c - self.a, e - self.b, o)

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __mul__(self, o):
        if isinstance(o, (PadicInt, QuadElt)):
            return NotImplemented
        c, e = self._other(o)
        d = o.d if (not self.b and isinstance(o, QuadraticNumber)) else self.d
        return QuadraticNumber(self.a * c + d * self.b * e, self.a * e + self.b * c, d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b, self.d)

    def inverse(self) -> QuadraticNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, o):
        if not isinstance(o, QuadraticNumber):
            o = QuadraticNumber(o, 0, self.d)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return QuadraticNumber(o, 0, self.d) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = QuadraticNumber(1, 0, self.d)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, o):
        if isinstance(o, QuadraticNumber):
            return self.a == o.a and self.b == o.b and (not self.b or self.d == o.d)
        if isinstance(o, (int, Rational)):
            return self.b == 0 and self.a == o
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if not self.b else hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a or self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.d})"


def sqrt_of(d: int) -> QuadraticNumber:
    return QuadraticNumber(0, 1, d)


class QuadraticField(CoeffRing):
    """Q(sqrt d) as an exact coefficient ring."""

    def __init__(self, d: int):
        if d in (0, 1):
            raise ValueError("d must not be a square")
        self.d = d
        self.name = f"Q(sqrt({d}))"

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self):
        return hash(("Qd", self.d))

    def __repr__(self):
        return self.name

    @property
    def zero(self):
        return QuadraticNumber(0, 0, self.d)

    @property
    def one(self):
        return QuadraticNumber(1, 0, self.d)

    @property
    def gen(self) -> QuadraticNumber:
        return QuadraticNumber(0, 1, self.d)

    def coerce(self, x):
        if isinstance(x, QuadraticNumber):
            if x.b and x.d != self.d:
                raise ValueError(f"{x} is not in {self.name}")
            return QuadraticNumber(x.a, x.b, self.d)
        return QuadraticNumber(QQ.coerce(x), 0, self.d)

    def is_unit(self, x):
        return bool(self.coerce(x))

    def inv(self, x):
        return self.coerce(x).inverse()

    def div_int(self, x, n):
        x = self.coerce(x)
        return QuadraticNumber(x.a / n, x.b / n, self.d)

    def nth_root(self, x, n):
        x = self.coerce(x)
        if x.b == 0:
            return QuadraticNumber(QQ.nth_root(x.a, n), 0, self.d)
        raise ValueError("roots of irrational leading coefficients are not supported")

    def mul_coeffs(self, a, b, n):
        A = [x.a for x in a[:n]]
        B = [x.b for x in a[:n]]
        C = [x.a for x in b[:n]]
        D = [x.b for x in b[:n]]
        ac = QQ.mul_coeffs(A, C, n)
        bd = QQ.mul_coeffs(B, D, n) if any(B) and any(D) else [Fraction(0)] * len(ac)
        ad = QQ.mul_coeffs(A, D, n) if any(D) else [Fraction(0)] * len(ac)
        bc = QQ.mul_coeffs(B, C, n) if any(B) else [Fraction(0)] * len(ac)
        d = self.d
        m = min(len(ac), len(bd), len(ad), len(bc))
        return [QuadraticNumber(ac[i] + d * bd[i], ad[i] + bc[i], d) for i in range(m)]

    def compatible(self, other):
        return self == other

    def element_to_json(self, x):
        x = self.coerce(x)
        return [QQ.element_to_json(x.a), QQ.element_to_json(x.b)]

    def element_from_json(self, data):
        return QuadraticNumber(Fraction(data[0]), Fraction(data[1]), self.d)

    def to_json(self):
        return {"ring": "Qd", "d": self.d}


register_ring_decoder("Qd", lambda data: QuadraticField(data["d"]))


class PadicEmbedding:
    """Embeds exact rationals and quadratic numbers into Z_p or Z_p[w].

    ``branch`` (+1 or -1) picks the sign of each square root: sqrt(d) maps
    to ``branch`` times the root whose residue is the least positive one
    (for d a square mod p), or to ``branch * w * sqrt(d/r)`` otherwise.
    ``branches`` overrides the sign for individual d.
    """

    def __init__(self, p: int, N: int, branch: int = 1, need_extension: bool = False, branches: dict | None = None):
        if branch not in (1, -1) or any(b not in (1, -1) for b in (branches or {}).values()):
            raise ValueError("branch is +1 or -1")
        self.branches = dict(branches or {})
        self.p = p
        self.N = N
        self.branch = branch
        self.base = ZpRing(p, N)
        self.quad = UnramifiedQuad(p, N)
        self._roots: dict[int, object] = {}
        self.extended = need_extension

    @property
    def ring(self):
        return self.quad if self.extended else self.base

    def sqrt(self, d: int):
        if d not in self._roots:
            p = self.p
            sign = self.branches.get(d, self.branch)
            if d % p == 0:
                raise ValueError(f"sqrt({d}) is not a {p}-adic unit")
            if legendre(d, p) == 1:
                r = sqrt_zp(self.base.coerce(d))
                if r.v % p > p // 2:
                    r = -r
                self._roots[d] = r * sign
            else:
                q = self.quad
                rest = sqrt_zp(self.base.coerce(d) * self.base.inv(self.base.coerce(q.r)))
                if rest.v % p > p // 2:
                    rest = -rest
                self._roots[d] = q.w * rest * sign
                self.extended = True
        return self._roots[d]

    def needs_extension(self, d: int) -> bool:
        return legendre(d, self.p) == -1

    def __call__(self, x):
        if isinstance(x, QuadraticNumber):
            if not x.b:
                return self._lift(self.base.coerce(x.a))
            s = self.sqrt(x.d)
            val = self._lift(self.base.coerce(x.a)) + self._lift(self.base.coerce(x.b)) * self._lift(s)
            return val
        if isinstance(x, (PadicInt, QuadElt)):
            return self._lift(x)
        return self._lift(self.base.coerce(x))

    def _lift(self, x):
        if self.extended:
            return self.quad.coerce(x)
        return x

    def valuation(self, x) -> int:
        v = self(x)
        return v.valuation()


def ring_for(values, default: CoeffRing = QQ) -> CoeffRing:
    """Smallest exact ring containing the given rationals/quadratic numbers."""
    d = None
    for v in values:
        if isinstance(v, QuadraticNumber) and v.b:
            if d is not None and d != v.d:
                raise ValueError("values from different quadratic fields")
            d = v.d
    return QuadraticField(d) if d is not None else default


__all__ = [
    "QuadraticNumber",
    "QuadraticField",
    "PadicEmbedding",
    "RationalField",
    "sqrt_of",
    "ring_for",
]

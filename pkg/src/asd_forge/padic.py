"""p-adic arithmetic at capped precision.

Three coefficient rings are provided:

* ``ZpRing(p, N)``: Z/p^N, elements are ``PadicInt``.
* ``UnramifiedQuad(p, N)``: Z_p[w]/(w^2 - r) for a quadratic non-residue r.
* ``EisensteinExt(p, M)``: Z_p[pi] with pi^(p-1) = -p, to pi-adic precision M.

The first two plug into :class:`asd_forge.series.PuiseuxSeries`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import gmpy2

from .series import CoeffRing, int_poly_mul, register_ring_decoder


# -- integer helpers --------------------------------------------------

def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    out = []
    p = int(gmpy2.next_prime(lo - 1)) if lo > 2 else 2
    while p <= hi:
        out.append(p)
        p = int(gmpy2.next_prime(p))
    return out


def vp(x, p: int) -> float | int:
    """p-adic valuation of an integer or rational; ``inf`` for zero."""
    if isinstance(x, Fraction) or isinstance(x, Rational) and not isinstance(x, int):
        x = Fraction(x)
        if x == 0:
            return math.inf
        return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)
    if x == 0:
        return math.inf
    return _vp_int(int(x), p)


def _vp_int(n: int, p: int) -> int:
    if n == 0:
        return math.inf
    return int(gmpy2.remove(gmpy2.mpz(n), p)[1])


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p; accepts p-integral rationals."""
    if isinstance(a, Fraction):
        if a.denominator % p == 0:
            raise ValueError("denominator divisible by p")
        a = a.numerator * a.denominator
    return int(gmpy2.legendre(a % p, p))


def kronecker(a: int, n: int) -> int:
    return int(gmpy2.kronecker(a, n))


def sqrt_mod_p(a: int, p: int) -> int | None:
    """Some square root of a mod p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def non_residue(p: int) -> int:
    r = 2
    while pow(r, (p - 1) // 2, p) != p - 1:
        r += 1
    return r


def rational_mod(x, modulus: int) -> int:
    """Image of a rational with denominator prime to the modulus."""
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


# -- Z/p^N -------------------------------------------------------------

class PadicInt:
    """Element of Z_p known modulo p^N; the residue lives in [0, p^N)."""

    __slots__ = ("ring", "v")

    def __init__(self, ring: ZpRing, v: int):
        self.ring = ring
        self.v = v % ring.modulus

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def precision(self) -> int:
        return self.ring.N

    @property
    def residue(self) -> int:
        return self.v

    def valuation(self) -> int:
        """Valuation capped at the precision."""
        if self.v == 0:
            return self.ring.N
        return min(_vp_int(self.v, self.ring.p), self.ring.N)

    def is_unit(self) -> bool:
        return self.v % self.ring.p != 0

    def _other(self, o):
        if isinstance(o, PadicInt):
            if o.ring is not self.ring and o.ring != self.ring:
                raise ValueError("p-adic operands from different rings")
            return o.v
        return self.ring.coerce(o).v

    def __add__(self, o):
        if isinstance(o, (QuadElt,)):
            return NotImplemented
        return PadicInt(self.ring, self.v + self._other(o))

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, QuadElt):
            return NotImplemented
        return PadicInt(self.ring, self.v - self._other(o))

    def __rsub__(self, o):
        return PadicInt(self.ring, self._other(o) - self.v)

    def __mul__(self, o):
        if isinstance(o, QuadElt):
            return NotImplemented
        return PadicInt(self.ring, self.v * self._other(o))

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(self.ring, -self.v)

    def __truediv__(self, o):
        return self * self.ring.inv(self.ring.coerce(o) if not isinstance(o, PadicInt) else o)

    def __rtruediv__(self, o):
        return self.ring.coerce(o) * self.ring.inv(self)

    def __pow__(self, e: int):
        if e < 0:
            return self.ring.inv(self) ** (-e)
        return PadicInt(self.ring, pow(self.v, e, self.ring.modulus))

    def __eq__(self, o):
        if isinstance(o, PadicInt):
            return self.ring == o.ring and self.v == o.v
        if isinstance(o, (int, Fraction)):
            try:
                return self.v == self.ring.coerce(o).v
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.p, self.ring.N, self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def centered(self) -> int:
        """Representative in (-p^N/2, p^N/2]."""
        m = self.ring.modulus
        return self.v - m if self.v > m // 2 else self.v

    def __repr__(self):
        return f"{self.v} + O({self.ring.p}^{self.ring.N})"

    def to_json(self) -> dict:
        return {"p": self.ring.p, "precision": self.ring.N, "residue": str(self.v)}


class ZpRing(CoeffRing):
    """The integers modulo p^N, viewed as Z_p at capped precision."""

    def __init__(self, p: int, N: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if N < 1:
            raise ValueError("precision must be positive")
        self.p = p
        self.N = N
        self.modulus = p ** N
        self.name = f"Zp({p},{N})"
        self._zero = PadicInt(self, 0)
        self._one = PadicInt(self, 1)

    def __eq__(self, other):
        return isinstance(other, ZpRing) and other.p == self.p and other.N == self.N

    def __hash__(self):
        return hash(("Zp", self.p, self.N))

    def __repr__(self):
        return self.name

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    def __call__(self, x) -> PadicInt:
        return self.coerce(x)

    def coerce(self, x) -> PadicInt:
        if isinstance(x, PadicInt):
            if x.ring == self:
                return x
            if x.ring.p != self.p:
                raise ValueError("mismatched primes")
            if x.ring.N < self.N:
                raise ValueError("cannot raise p-adic precision")
            return PadicInt(self, x.v)
        if isinstance(x, int):
            return PadicInt(self, x)
        if isinstance(x, (Fraction, Rational)):
            x = Fraction(x)
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} is not {self.p}-integral")
            return PadicInt(self, x.numerator * pow(x.denominator, -1, self.modulus))
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def is_unit(self, x) -> bool:
        return self.coerce(x).v % self.p != 0

    def inv(self, x) -> PadicInt:
        x = self.coerce(x)
        if x.v % self.p == 0:
            raise ZeroDivisionError(f"{x} is not a unit in {self.name}")
        return PadicInt(self, pow(x.v, -1, self.modulus))

    def div_int(self, x, n: int):
        if n % self.p == 0:
            raise ZeroDivisionError(f"division by {n} loses {self.p}-adic precision")
        return self.coerce(x) * PadicInt(self, pow(n, -1, self.modulus))

    def nth_root(self, x, n: int) -> PadicInt:
        x = self.coerce(x)
        if x.v == 1:
            return self._one
        if n % self.p == 0 or not self.is_unit(x):
            raise ValueError(f"{n}-th root only for units with p not dividing {n}")
        r0 = next((r for r in range(1, self.p) if pow(r, n, self.p) == x.v % self.p), None)
        if r0 is None:
            raise ValueError(f"{x} is not an {n}-th power residue mod {self.p}")
        return hensel_root(lambda y: y ** n - x, lambda y: n * y ** (n - 1), PadicInt(self, r0))

    def mul_coeffs(self, a, b, n):
        ia = [x.v for x in a[:n]]
        ib = ia if a is b else [x.v for x in b[:n]]
        if min(len(ia), len(ib)) < 16:
            raw = _small_mul(ia, ib, n)
        else:
            raw = int_poly_mul(ia, ib, n)
        m = self.modulus
        return [PadicInt(self, c % m) for c in raw]

    def compatible(self, other) -> bool:
        return self == other

    def element_to_json(self, x):
        return str(self.coerce(x).v)

    def element_from_json(self, data):
        return PadicInt(self, int(data))

    def to_json(self) -> dict:
        return {"ring": "Zp", "p": self.p, "N": self.N}

    def teichmuller(self, a: int) -> PadicInt:
        return teichmuller(a, self.p, self.N)


def _small_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


register_ring_decoder("Zp", lambda d: ZpRing(d["p"], d["N"]))


def hensel_root(f, df, y0, iterations: int | None = None):
    """Newton iteration y <- y - f(y)/f'(y) from an approximate simple root."""
    ring = y0.ring
    steps = iterations or (ring.N.bit_length() + 2)
    y = y0
    for _ in range(steps):
        y = y - f(y) * ring.inv(df(y))
    return y


# -- Teichmuller, unit roots, Gamma_p ---------------------------------

def teichmuller(a: int, p: int, N: int) -> PadicInt:
    """The (p-1)-st root of unity congruent to a mod p."""
    if a % p == 0:
        raise ValueError("Teichmuller lift of 0 is not a root of unity")
    ring = ZpRing(p, N)
    m = ring.modulus
    return PadicInt(ring, pow(a % p, p ** (N - 1), m))


def hensel_quadratic_unit_root(trace, norm) -> PadicInt:
    """Unit root of T^2 - trace*T + norm, with trace a unit and p | norm."""
    ring = trace.ring
    trace = ring.coerce(trace)
    norm = ring.coerce(norm)
    if not trace.is_unit():
        raise ValueError("trace is not a unit: supersingular, no unit root")
    if norm.is_unit():
        raise ValueError("norm must be divisible by p")
    alpha = trace
    for _ in range(ring.N + 1):
        alpha = trace - norm * ring.inv(alpha)
    return alpha


def _check_odd(p):
    if p == 2:
        raise ValueError("p = 2 is outside the scope of the p-adic module")


def gamma_p_int(n: int, p: int, modulus: int) -> int:
    """Morita Gamma_p(n) for a nonnegative integer n, reduced mod ``modulus``."""
    _check_odd(p)
    if n < 0:
        raise ValueError("use gamma_p for negative or non-integral arguments")
    prod = 1
    for i in range(1, n):
        if i % p:
            prod = prod * i % modulus
    return (-prod if n % 2 else prod) % modulus



def gamma_p_exact(n: int, p: int) -> int:
    """Gamma_p(n) for a nonnegative integer n as an exact integer."""
    _check_odd(p)
    if n < 0:
        raise ValueError("exact values exist only at nonnegative integers")
    prod = 1
    for i in range(1, n):
        if i % p:
            prod *= i
    return -prod if n % 2 else prod


def central_binomial_ratio(n: int, p: int) -> tuple[Fraction, Fraction]:
    """Both sides of binom(2n,n)/binom(2[n/p],[n/p]) = -Gamma_p(1+2n)/Gamma_p(1+n)^2 s_(n,p).

    s_(n,p) is 1 when the last p-adic digit of n is below p/2 and
    p(2[n/p] + 1) otherwise.
    """
    q, rem = divmod(n, p)
    lhs = Fraction(math.comb(2 * n, n), math.comb(2 * q, q))
    s = 1 if 2 * rem < p else p * (2 * q + 1)
    rhs = Fraction(-gamma_p_exact(1 + 2 * n, p), gamma_p_exact(1 + n, p) ** 2) * s
    return lhs, rhs

@lru_cache(maxsize=None)
def _gamma_table(p: int, N: int) -> tuple:
    """Gamma_p(m) mod p^N for all 0 <= m < p^N (small p^N only)."""
    mod = p ** N
    out = [1]
    prod = 1
    for m in range(1, mod):
        # Gamma(m) = (-1)^m prod_{0<i<m, p not | i} i
        i = m - 1
        if i % p:
            prod = prod * i % mod
        out.append(-prod % mod if m % 2 else prod)
    return tuple(out)


def gamma_p(x, p: int, N: int) -> PadicInt:
    """Morita's p-adic Gamma function at x in Z_p, to precision N.

    Non-integral or negative x is evaluated at its representative in
    [0, p^N), which is exact to precision N by continuity.
    """
    _check_odd(p)
    ring = ZpRing(p, N)
    if isinstance(x, PadicInt):
        m = x.v if x.ring.N >= N else None
        if m is None:
            raise ValueError("argument known to lower precision than requested")
        m %= ring.modulus
    else:
        m = rational_mod(x, ring.modulus) if not isinstance(x, int) or x < 0 else x
    if m < ring.modulus and ring.modulus <= 2_000_000:
        return PadicInt(ring, _gamma_table(p, N)[m % ring.modulus])
    if isinstance(x, int) and x >= 0:
        return PadicInt(ring, gamma_p_int(x, p, ring.modulus))
    return PadicInt(ring, gamma_p_int(m % ring.modulus, p, ring.modulus))


# -- unramified quadratic extension -----------------------------------

class QuadElt:
    """a + b*w with w^2 = r over Z/p^N."""

    __slots__ = ("ring", "a", "b")

    def __init__(self, ring: UnramifiedQuad, a: int, b: int):
        m = ring.modulus
        self.ring = ring
        self.a = a % m
        self.b = b % m

    def _other(self, o):
        if isinstance(o, QuadElt):
            return o.a, o.b
        c = self.ring.coerce(o)
        return c.a, c.b

    def __add__(self, o):
        c, d = self._other(o)
        return QuadElt(self.ring, self.a + c, self.b + d)

    __radd__ = __add__

    def __sub__(self, o):
        c, d = self._other(o)
        return QuadElt(self.ring, self.a - c, self.b - d)

    def __rsub__(self, o):
        c, d = self._other(o)
        return QuadElt(self.ring, c - self.a, d - self.b)

    def __neg__(self):
        return QuadElt(self.ring, -self.a, -self.b)

    def __mul__(self, o):
        c, d = self._other(o)
        r = self.ring.r
        return QuadElt(self.ring, self.a * c + r * self.b * d, self.a * d + self.b * c)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self * self.ring.inv(self.ring.coerce(o))

    def __pow__(self, e: int):
        if e < 0:
            return self.ring.inv(self) ** (-e)
        out = self.ring.one
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, o):
        if isinstance(o, QuadElt):
            return self.ring == o.ring and self.a == o.a and self.b == o.b
        try:
            c = self.ring.coerce(o)
        except (TypeError, ZeroDivisionError):
            return NotImplemented
        return self.a == c.a and self.b == c.b

    def __hash__(self):
        return hash((self.ring.p, self.ring.N, self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def conjugate(self) -> QuadElt:
        """Frobenius sigma: w -> -w."""
        return QuadElt(self.ring, self.a, -self.b)

    def norm(self) -> PadicInt:
        return PadicInt(self.ring.base, self.a * self.a - self.ring.r * self.b * self.b)

    def valuation(self) -> int:
        p, N = self.ring.p, self.ring.N
        vals = [min(_vp_int(x, p), N) for x in (self.a, self.b) if x]
        return min(vals) if vals else N

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def __repr__(self):
        return f"({self.a} + {self.b}*w) + O({self.ring.p}^{self.ring.N})"

    def to_json(self) -> dict:
        return {"p": self.ring.p, "precision": self.ring.N, "residue": [str(self.a), str(self.b)], "w2": self.ring.r}


class UnramifiedQuad(CoeffRing):
    """Z_p[w]/(w^2 - r), r the least positive quadratic non-residue mod p."""

    def __init__(self, p: int, N: int, r: int | None = None):
        _check_odd(p)
        self.p = p
        self.N = N
        self.modulus = p ** N
        self.r = r if r is not None else non_residue(p)
        if legendre(self.r, p) != -1:
            raise ValueError(f"{self.r} is a square mod {p}")
        self.base = ZpRing(p, N)
        self.name = f"Zp({p},{N})[sqrt({self.r})]"
        self._zero = QuadElt(self, 0, 0)
        self._one = QuadElt(self, 1, 0)

    def __eq__(self, other):
        return isinstance(other, UnramifiedQuad) and (other.p, other.N, other.r) == (self.p, self.N, self.r)

    def __hash__(self):
        return hash(("Zp2", self.p, self.N, self.r))

    def __repr__(self):
        return self.name

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    @property
    def w(self) -> QuadElt:
        return QuadElt(self, 0, 1)

    def __call__(self, a, b=0) -> QuadElt:
        return self.coerce(a) + self.coerce(b) * self.w if b else self.coerce(a)

    def coerce(self, x) -> QuadElt:
        if isinstance(x, QuadElt):
            if x.ring == self:
                return x
            raise ValueError("mismatched extension rings")
        if isinstance(x, PadicInt):
            if x.ring.p != self.p:
                raise ValueError("mismatched primes")
            return QuadElt(self, x.v, 0)
        return QuadElt(self, self.base.coerce(x).v, 0)

    def is_unit(self, x) -> bool:
        return self.coerce(x).is_unit()

    def inv(self, x) -> QuadElt:
        x = self.coerce(x)
        n = (x.a * x.a - self.r * x.b * x.b) % self.modulus
        if n % self.p == 0:
            raise ZeroDivisionError(f"{x} is not a unit")
        ni = pow(n, -1, self.modulus)
        return QuadElt(self, x.a * ni, -x.b * ni)

    def div_int(self, x, n: int):
        if n % self.p == 0:
            raise ZeroDivisionError(f"division by {n} loses {self.p}-adic precision")
        return self.coerce(x) * pow(n, -1, self.modulus)

    def nth_root(self, x, n: int):
        x = self.coerce(x)
        if x == self._one:
            return self._one
        raise ValueError("roots in the quadratic extension are only provided for 1")

    def sqrt(self, d) -> QuadElt:
        """A square root of a p-adic unit d (in Z_p or via w)."""
        d = self.base.coerce(d)
        if legendre(d.v, self.p) == 1:
            return self.coerce(sqrt_zp(d))
        return self.w * sqrt_zp(d * self.base.inv(self.base.coerce(self.r)))

    def mul_coeffs(self, a, b, n):
        A = [x.a for x in a[:n]]
        B = [x.b for x in a[:n]]
        C = [x.a for x in b[:n]]
        D = [x.b for x in b[:n]]
        mul = _small_mul if min(len(A), len(C)) < 16 else int_poly_mul
        ac = mul(A, C, n)
        bd = mul(B, D, n)
        s = mul([x + y for x, y in zip(A, B)], [x + y for x, y in zip(C, D)], n)
        r = self.r
        return [QuadElt(self, ac[i] + r * bd[i], s[i] - ac[i] - bd[i]) for i in range(len(ac))]

    def element_to_json(self, x):
        x = self.coerce(x)
        return [str(x.a), str(x.b)]

    def element_from_json(self, data):
        return QuadElt(self, int(data[0]), int(data[1]))

    def to_json(self) -> dict:
        return {"ring": "Zp2", "p": self.p, "N": self.N, "w2": self.r}


register_ring_decoder("Zp2", lambda d: UnramifiedQuad(d["p"], d["N"], d["w2"]))


def sqrt_zp(d: PadicInt) -> PadicInt:
    """Square root of a quadratic-residue unit in Z_p (p odd)."""
    ring = d.ring
    r0 = sqrt_mod_p(d.v % ring.p, ring.p)
    if r0 is None or not d.is_unit():
        raise ValueError(f"{d} has no unit square root in Z_{ring.p}")
    return hensel_root(lambda y: y * y - d, lambda y: 2 * y, PadicInt(ring, r0))


# -- Eisenstein extension pi^(p-1) = -p ------------------------------

class EisElt:
    """sum c_i pi^i (0 <= i < p-1), c_i in Z/p^K."""

    __slots__ = ("ring", "c")

    def __init__(self, ring: EisensteinExt, c):
        m = ring.modulus
        self.ring = ring
        self.c = tuple(x % m for x in c)

    def __add__(self, o):
        o = self.ring.coerce(o)
        return EisElt(self.ring, [x + y for x, y in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, o):
        o = self.ring.coerce(o)
        return EisElt(self.ring, [x - y for x, y in zip(self.c, o.c)])

    def __rsub__(self, o):
        return self.ring.coerce(o) - self

    def __neg__(self):
        return EisElt(self.ring, [-x for x in self.c])

    def __mul__(self, o):
        o = self.ring.coerce(o)
        e = self.ring.e
        p = self.ring.p
        out = [0] * e
        for i, x in enumerate(self.c):
            if not x:
                continue
            for j, y in enumerate(o.c):
                k = i + j
                if k < e:
                    out[k] += x * y
                else:
                    out[k - e] -= p * x * y
        return EisElt(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def valuation(self) -> int:
        """Valuation in units of v(pi) = 1/(p-1), capped at the precision."""
        e, p = self.ring.e, self.ring.p
        best = self.ring.M
        for i, x in enumerate(self.c):
            if x:
                best = min(best, e * _vp_int(x, p) + i)
        return best

    def is_zero(self) -> bool:
        return self.valuation() >= self.ring.M

    def __eq__(self, o):
        try:
            return (self - self.ring.coerce(o)).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.reduced().c)

    def reduced(self) -> EisElt:
        """Canonical form with every coefficient cut to the pi-adic precision."""
        e, p, M = self.ring.e, self.ring.p, self.ring.M
        out = []
        for i, x in enumerate(self.c):
            k = max(0, -(-(M - i) // e))
            out.append(x % p ** k)
        return EisElt(self.ring, out)

    def __repr__(self):
        terms = [f"{x}*pi^{i}" for i, x in enumerate(self.reduced().c) if x]
        return (" + ".join(terms) or "0") + f" + O(pi^{self.ring.M})"

    def to_json(self) -> dict:
        return {"p": self.ring.p, "precision": self.ring.M, "coefficients": [str(x) for x in self.reduced().c]}


class EisensteinExt:
    """Z_p[pi] with pi^(p-1) = -p, known to pi-adic precision M."""

    def __init__(self, p: int, M: int):
        _check_odd(p)
        self.p = p
        self.e = p - 1
        self.M = M
        # p-adic digits needed per coefficient, plus guard digits
        self.K = -(-M // self.e) + 2
        self.modulus = p ** self.K
        self.base = ZpRing(p, self.K)

    def __eq__(self, other):
        return isinstance(other, EisensteinExt) and (other.p, other.M) == (self.p, self.M)

    def __hash__(self):
        return hash(("Eis", self.p, self.M))

    @property
    def zero(self):
        return EisElt(self, [0] * self.e)

    @property
    def one(self):
        return self.coerce(1)

    @property
    def pi(self) -> EisElt:
        c = [0] * self.e
        if self.e == 1:
            c[0] = -self.p
        else:
            c[1] = 1
        return EisElt(self, c)

    def coerce(self, x) -> EisElt:
        if isinstance(x, EisElt):
            return x
        if isinstance(x, PadicInt):
            x = x.v
        v = self.base.coerce(x).v
        return EisElt(self, [v] + [0] * (self.e - 1))

    def inv(self, x) -> EisElt:
        x = self.coerce(x)
        if x.valuation() != 0:
            raise ZeroDivisionError("not a unit")
        # Newton: y <- y (2 - x y), starting from the inverse of the residue
        y = self.coerce(pow(x.c[0] % self.p, -1, self.p))
        for _ in range(self.M.bit_length() + 3):
            y = y * (2 - x * y)
        return y


def _unit_power_series(ring: EisensteinExt, w: EisElt, exponent: Fraction) -> EisElt:
    """(1 + w)^exponent by the binomial series, for v(w) >= 1 and p-integral exponent."""
    total = ring.one
    term_coeff = Fraction(1)
    power = ring.one
    for k in range(1, ring.M + 1):
        term_coeff = term_coeff * (exponent - k + 1) / k
        power = power * w
        if power.is_zero():
            break
        total = total + power * ring.base.coerce(term_coeff)
    return total


def zeta_p(ring: EisensteinExt, u: int = 1) -> EisElt:
    """The p-th root of unity 1 + T with T = u*pi mod pi^2, u in mu_(p-1) mod p.

    T solves T^(p-1) = pi^(p-1) c(T) with c(T) = 1 + sum_{i=2}^{p-1} binom(p,i)/p T^(i-1),
    so T = t(u) pi c(T)^(1/(p-1)) is a contraction on T = u*pi + O(pi^2).
    """
    p = ring.p
    if pow(u, p - 1, p) != 1 or u % p == 0:
        raise ValueError("branch must be a nonzero residue")
    teich_u = ring.coerce(teichmuller(u, p, ring.K))
    pi = ring.pi
    T = teich_u * pi
    exponent = Fraction(1, p - 1)
    for _ in range(ring.M + 2):
        c = ring.zero
        for i in range(p - 1, 1, -1):
            c = c * T + ring.coerce(math.comb(p, i) // p)
        w = c * T  # c(T) - 1
        T = teich_u * pi * _unit_power_series(ring, w, exponent)
    return ring.one + T


def gauss_sum(j: int, p: int, M: int, branch: int = 1) -> EisElt:
    """sum_{t in F_p^x} phi^(-j)(t) zeta^t, phi the Teichmuller character."""
    ring = EisensteinExt(p, M)
    z = zeta_p(ring, branch)
    total = ring.zero
    zt = ring.one
    for t in range(1, p):
        zt = zt * z
        chi = teichmuller(pow(t, -1, p), p, ring.K) ** j
        total = total + zt * ring.coerce(chi)
    return total


def gross_koblitz(j: int, p: int, M: int | None = None, branch: int = 1) -> tuple[EisElt, EisElt]:
    """(Gauss sum, -pi^j Gamma_p(j/(p-1))) to pi-adic precision M."""
    _check_odd(p)
    if not 0 <= j <= p - 2:
        raise ValueError("j must lie in [0, p-2]")
    if M is None:
        M = 3 * (p - 1)
    if M < 2 * (p - 1):
        raise ValueError("pi-adic precision must be at least 2(p-1)")
    ring = EisensteinExt(p, M)
    lhs = gauss_sum(j, p, M, branch)
    gam = gamma_p(Fraction(j, p - 1), p, ring.K)
    rhs = -(ring.pi ** j) * ring.coerce(gam.v)
    return lhs, rhs


def gross_koblitz_branch_scan(j: int, p: int, M: int | None = None) -> list[int]:
    """Residues u (branch T = u*pi mod pi^2) for which both sides agree."""
    return [u for u in range(1, p) if (lambda lr: lr[0] == lr[1])(gross_koblitz(j, p, M, u))]


def jacobi_sum_cubic(p: int, N: int, conjugate: bool = False) -> PadicInt:
    """J(chi, chi) = sum chi(x) chi(1-x) with chi = phi^((p-1)/3), in Z_p."""
    if p % 3 != 1:
        raise ValueError("cubic characters need p = 1 mod 3")
    ring = ZpRing(p, N)
    e = (p - 1) // 3 * (2 if conjugate else 1)
    total = ring.zero
    for x in range(2, p):
        total = total + teichmuller(x, p, N) ** e * teichmuller(1 - x, p, N) ** e
    return total


def morita_alpha(p: int, N: int) -> PadicInt:
    """Gamma_p(1/4)^2 / Gamma_p(1/2)."""
    g4 = gamma_p(Fraction(1, 4), p, N)
    g2 = gamma_p(Fraction(1, 2), p, N)
    return g4 * g4 / g2

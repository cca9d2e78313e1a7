"""Truncated dense Puiseux series over exchangeable exact coefficient rings.

A series is stored as ``sum c[i] q^((offset + i)/ram)`` together with an
absolute truncation bound ``prec``: every coefficient with index below
``prec`` (in units of ``1/ram``) is known, everything from ``prec`` on is
unknown.  ``prec=None`` marks an exact (finite) series.

Large products go through Kronecker substitution on gmpy2 integers; the
result is exact, only faster than the schoolbook loop.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

try:
    import gmpy2

    def _bigmul(x: int, y: int) -> int:
        if x == y:
            return int(gmpy2.square(gmpy2.mpz(x)))
        return int(gmpy2.mpz(x) * gmpy2.mpz(y))

except ImportError:  # pragma: no cover
    def _bigmul(x: int, y: int) -> int:
        return x * y


_SCHOOLBOOK_CUTOFF = 24


def _schoolbook(a, b, n, zero):
    out = [zero] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        lim = n - i
        for j, y in enumerate(b[:lim]):
            out[i + j] += x * y
    return out


def _pack(vals, nbytes):
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in vals), "little")


def _pack_signed(vals, nbytes):
    if all(v >= 0 for v in vals):
        return _pack(vals, nbytes)
    pos = _pack([v if v > 0 else 0 for v in vals], nbytes)
    neg = _pack([-v if v < 0 else 0 for v in vals], nbytes)
    return pos - neg


def int_poly_mul(a: list[int], b: list[int], n: int) -> list[int]:
    """Product of integer coefficient lists, truncated to ``n`` terms."""
    a = a[:n]
    b = b[:n]
    if not a or not b or n <= 0:
        return [0] * max(n, 0)
    if min(len(a), len(b)) < _SCHOOLBOOK_CUTOFF:
        return _schoolbook(a, b, n, 0)
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * n
    bound = ma * mb * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * nbytes - 1)
    pa = _pack_signed(a, nbytes)
    pb = pa if a is b else _pack_signed(b, nbytes)
    prod = _bigmul(pa, pb)
    length = min(len(a) + len(b) - 1, n)
    offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * (len(a) + len(b) - 1), "little")
    data = (prod + offset).to_bytes((len(a) + len(b) - 1) * nbytes + 1, "little")
    out = [
        int.from_bytes(data[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(length)
    ]
    out.extend([0] * (n - length))
    return out


class CoeffRing:
    """Interface for coefficient rings.  Elements support + - * and ==."""

    name = "abstract"

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def coerce(self, x):
        raise NotImplementedError

    def is_unit(self, x) -> bool:
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def div_int(self, x, n: int):
        """Exact division by a nonzero integer (raises if ``n`` is not a unit)."""
        return x * self.inv(self.coerce(n))

    def nth_root(self, x, n: int):
        raise ValueError(f"no {n}-th roots available in {self.name}")

    def mul_coeffs(self, a, b, n):
        return _schoolbook(a, b, n, self.zero)

    def compatible(self, other) -> bool:
        return self == other

    def element_to_json(self, x):
        raise NotImplementedError

    def element_from_json(self, data):
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"ring": self.name}


def _exact_root(x: int, n: int) -> int | None:
    if x < 0:
        if n % 2 == 0:
            return None
        r = _exact_root(-x, n)
        return None if r is None else -r
    if x in (0, 1):
        return x
    r = round(x ** (1.0 / n)) if x.bit_length() < 1000 else None
    if r is None or r ** n != x:
        # integer Newton for large inputs
        r = 1 << ((x.bit_length() + n - 1) // n)
        while True:
            s = ((n - 1) * r + x // r ** (n - 1)) // n
            if s >= r:
                break
            r = s
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** n == x:
                return c
        return None
    return r


class RationalField(CoeffRing):
    """Arbitrary-precision rationals (``fractions.Fraction``)."""

    name = "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, Rational)):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def is_unit(self, x):
        return x != 0

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("0 is not a unit in QQ")
        return 1 / Fraction(x)

    def div_int(self, x, n):
        return Fraction(x) / n

    def nth_root(self, x, n):
        x = Fraction(x)
        num = _exact_root(x.numerator, n)
        den = _exact_root(x.denominator, n)
        if num is None or den is None:
            raise ValueError(f"{x} has no rational {n}-th root")
        return Fraction(num, den)

    def mul_coeffs(self, a, b, n):
        a = a[:n]
        b = b[:n]
        if min(len(a), len(b)) < _SCHOOLBOOK_CUTOFF:
            return _schoolbook(a, b, n, Fraction(0))
        da = math.lcm(*(x.denominator for x in a))
        db = da if a is b else math.lcm(*(x.denominator for x in b))
        na = [x.numerator * (da // x.denominator) for x in a]
        nb = na if a is b else [x.numerator * (db // x.denominator) for x in b]
        prod = int_poly_mul(na, nb, n)
        d = da * db
        if d == 1:
            return [Fraction(c) for c in prod]
        return [Fraction(c, d) if c else Fraction(0) for c in prod]

    def element_to_json(self, x):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def element_from_json(self, data):
        return Fraction(data)


QQ = RationalField()


def _lcm_ram(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class PuiseuxSeries:
    """Immutable truncated series ``sum c_n q^(n/ram)``."""

    __slots__ = ("ring", "ram", "offset", "coeffs", "prec")

    def __init__(self, coeffs=(), offset: int = 0, ram: int = 1, prec: int | None = None, ring: CoeffRing = QQ):
        if ram < 1:
            raise ValueError("ramification index must be positive")
        cs = [ring.coerce(c) for c in coeffs]
        if prec is not None:
            if prec < offset:
                cs = []
                offset = prec
            else:
                cs = cs[: prec - offset]
                cs.extend([ring.zero] * (prec - offset - len(cs)))
        self._set(ring, ram, offset, cs, prec)

    def _set(self, ring, ram, offset, cs, prec):
        i = 0
        zero = ring.zero
        while i < len(cs) and cs[i] == zero:
            i += 1
        if i:
            cs = cs[i:]
            offset += i
        if prec is None:
            while cs and cs[-1] == zero:
                cs.pop()
            if not cs:
                offset = 0
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "ram", ram)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, key, value):
        raise AttributeError("PuiseuxSeries is immutable")

    @classmethod
    def _raw(cls, ring, ram, offset, cs, prec):
        obj = cls.__new__(cls)
        obj._set(ring, ram, offset, list(cs), prec)
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def monomial(cls, coeff, exponent, ram: int | None = None, prec: int | None = None, ring: CoeffRing = QQ):
        e = Fraction(exponent)
        m = ram or e.denominator
        if (e * m).denominator != 1:
            raise ValueError("exponent not on the requested grid")
        return cls([coeff], offset=int(e * m), ram=m, prec=prec, ring=ring)

    @classmethod
    def gen(cls, prec: int | None = None, ring: CoeffRing = QQ):
        """The variable ``x`` itself."""
        return cls([1], offset=1, prec=prec, ring=ring)

    @classmethod
    def from_dict(cls, terms: dict, ram: int = 1, prec: int | None = None, ring: CoeffRing = QQ):
        """Build from ``{index: coeff}`` on the ``1/ram`` grid."""
        if not terms:
            return cls([], 0, ram, prec, ring)
        lo = min(terms)
        hi = max(terms) if prec is None else prec - 1
        cs = [terms.get(i, 0) for i in range(lo, hi + 1)]
        return cls(cs, lo, ram, prec, ring)

    # -- basic accessors ----------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.prec is None

    @property
    def valuation(self) -> int:
        """Index (in units of 1/ram) of the first nonzero coefficient."""
        if self.coeffs:
            return self.offset
        return self.prec if self.prec is not None else math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, n: int):
        """Coefficient at index ``n`` on the ``1/ram`` grid."""
        if self.prec is not None and n >= self.prec:
            raise IndexError(f"index {n} beyond truncation {self.prec}")
        i = n - self.offset
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero

    def __getitem__(self, exponent):
        e = Fraction(exponent) * self.ram
        if e.denominator != 1:
            return self.ring.zero
        return self.coeff(int(e))

    def coefficients(self, start: int | None = None, stop: int | None = None) -> list:
        """Dense coefficient list for indices ``start <= n < stop``."""
        if start is None:
            start = self.offset if self.coeffs else 0
        if stop is None:
            stop = self.prec if self.prec is not None else self.offset + len(self.coeffs)
        return [self.coeff(n) for n in range(start, stop)]

    def items(self):
        for i, c in enumerate(self.coeffs):
            if c != self.ring.zero:
                yield Fraction(self.offset + i, self.ram), c

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:8]):
            if c == self.ring.zero:
                continue
            e = Fraction(self.offset + i, self.ram)
            terms.append(f"({c})*q^{e}" if e else f"({c})")
        body = " + ".join(terms) if terms else "0"
        if len(self.coeffs) > 8:
            body += " + ..."
        if self.prec is not None:
            body += f" + O(q^{Fraction(self.prec, self.ram)})"
        return body

    # -- grid handling ------------------------------------------------
    def with_ram(self, m: int) -> PuiseuxSeries:
        """Exact re-indexing onto the finer grid ``q^(1/m)``."""
        if m % self.ram:
            raise ValueError(f"ramification {m} is not a multiple of {self.ram}")
        k = m // self.ram
        if k == 1:
            return self
        zero = self.ring.zero
        cs = []
        for c in self.coeffs:
            cs.append(c)
            cs.extend([zero] * (k - 1))
        if self.prec is None:
            while cs and cs[-1] == zero:
                cs.pop()
            prec = None
        else:
            prec = self.prec * k
            cs = cs[: prec - self.offset * k]
            cs.extend([zero] * (prec - self.offset * k - len(cs)))
        return PuiseuxSeries._raw(self.ring, m, self.offset * k, cs, prec)

    def reduce_ram(self) -> PuiseuxSeries:
        """Coarsest grid that carries every known coefficient and the bound."""
        g = self.ram
        for i, c in enumerate(self.coeffs):
            if c != self.ring.zero:
                g = math.gcd(g, self.offset + i)
        if self.prec is not None:
            g = math.gcd(g, self.prec)
        if g <= 1:
            return self
        cs = [self.coeff(n) for n in range(self.offset, self.offset + len(self.coeffs), g)]
        prec = None if self.prec is None else self.prec // g
        return PuiseuxSeries._raw(self.ring, self.ram // g, self.offset // g, cs, prec)

    def _check_ring(self, other):
        if not self.ring.compatible(other.ring):
            raise ValueError(f"incompatible coefficient rings {self.ring!r} and {other.ring!r}")

    def _aligned(self, other):
        self._check_ring(other)
        m = _lcm_ram(self.ram, other.ram)
        return self.with_ram(m), other.with_ram(m)

    def truncate(self, prec: int) -> PuiseuxSeries:
        """Forget everything from index ``prec`` on."""
        if self.prec is not None and prec > self.prec:
            raise ValueError("cannot raise precision by truncation")
        cs = [self.coeff(n) for n in range(self.offset, prec)] if prec > self.offset else []
        return PuiseuxSeries._raw(self.ring, self.ram, min(self.offset, prec), cs, prec)

    # -- ring operations ----------------------------------------------
    def __neg__(self):
        return PuiseuxSeries._raw(self.ring, self.ram, self.offset, [-c for c in self.coeffs], self.prec)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries([other], ram=self.ram, ring=self.ring)
        f, g = self._aligned(other)
        prec = _min_prec(f.prec, g.prec)
        lo = min(f.offset if f.coeffs else math.inf, g.offset if g.coeffs else math.inf)
        if lo is math.inf:
            lo = prec if prec is not None else 0
        hi = max(f.offset + len(f.coeffs), g.offset + len(g.coeffs))
        if prec is not None:
            hi = prec
            lo = min(lo, prec)
        zero = f.ring.zero
        cs = [zero] * max(hi - lo, 0)
        for src in (f, g):
            base = src.offset - lo
            for i, c in enumerate(src.coeffs):
                j = base + i
                if 0 <= j < len(cs):
                    cs[j] = cs[j] + c
        return PuiseuxSeries._raw(f.ring, f.ram, lo, cs, prec)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries([other], ram=self.ram, ring=self.ring)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> PuiseuxSeries:
        c = self.ring.coerce(c)
        return PuiseuxSeries._raw(self.ring, self.ram, self.offset, [c * x for x in self.coeffs], self.prec)

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return self.scale(other)
        f, g = self._aligned(other)
        if (not f.coeffs and f.prec is None) or (not g.coeffs and g.prec is None):
            return PuiseuxSeries._raw(f.ring, f.ram, 0, [], None)
        # a zero series known to O(q^P) has valuation P
        vf, vg = f.valuation, g.valuation
        precs = []
        if f.prec is not None:
            precs.append(f.prec + vg)
        if g.prec is not None:
            precs.append(g.prec + vf)
        prec = min(precs) if precs else None
        lo = vf + vg
        if prec is None:
            n = len(f.coeffs) + len(g.coeffs) - 1
        else:
            n = max(prec - lo, 0)
        cs = f.ring.mul_coeffs(list(f.coeffs), list(f.coeffs) if f is g else list(g.coeffs), n)
        if prec is not None:
            cs = cs + [f.ring.zero] * (n - len(cs))
        return PuiseuxSeries._raw(f.ring, f.ram, lo, cs[:n], prec)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("integer exponents only; use nth_root for fractional powers")
        if e < 0:
            return self.inverse() ** (-e)
        result = PuiseuxSeries([self.ring.one], ram=self.ram, ring=self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self, prec: int | None = None) -> PuiseuxSeries:
        """Multiplicative inverse; ``prec`` bounds the result for exact input."""
        if not self.coeffs:
            raise ZeroDivisionError("series is zero to known precision")
        c0 = self.coeffs[0]
        if not self.ring.is_unit(c0):
            raise ValueError(f"leading coefficient {c0} is not a unit in {self.ring.name}")
        v = self.offset
        if self.prec is None:
            if prec is None:
                if len(self.coeffs) == 1:
                    return PuiseuxSeries._raw(self.ring, self.ram, -v, [self.ring.inv(c0)], None)
                raise ValueError("inverse of an exact non-monomial needs an explicit prec")
            rel = prec + v
        else:
            rel = self.prec - v
            if prec is not None:
                rel = min(rel, prec + v)
        cs = series_inverse_coeffs(self.ring, list(self.coeffs), rel)
        return PuiseuxSeries._raw(self.ring, self.ram, -v, cs, rel - v)

    def __truediv__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return self.scale(self.ring.inv(self.ring.coerce(other)))
        f, g = self._aligned(other)
        prec = None
        if g.prec is None and len(g.coeffs) > 1:
            if f.prec is None:
                raise ValueError("division of exact series needs an explicit truncation")
            prec = f.prec - g.offset
        return f * g.inverse(prec=prec)

    def __rtruediv__(self, other):
        return PuiseuxSeries([other], ram=self.ram, ring=self.ring) / self

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            if self.prec is not None:
                return NotImplemented
            other = PuiseuxSeries([other], ring=self.ring)
        try:
            f, g = self._aligned(other)
        except ValueError:
            return False
        return f.prec == g.prec and f.offset == g.offset and f.coeffs == g.coeffs

    def __hash__(self):
        s = self.reduce_ram()
        return hash((s.ram, s.offset, s.coeffs, s.prec))

    def agrees_with(self, other, prec: int | None = None) -> bool:
        """Coefficient agreement up to the common known precision."""
        f, g = self._aligned(other)
        bound = _min_prec(f.prec, g.prec)
        if prec is not None:
            bound = prec * f.ram // self.ram if bound is None else min(bound, prec * f.ram // self.ram)
        if bound is None:
            return f == g
        lo = min(f.offset, g.offset, bound)
        return all(f.coeff(n) == g.coeff(n) for n in range(lo, bound))

    # -- analytic-style operations ------------------------------------
    def derivative(self) -> PuiseuxSeries:
        """d/dq on a series; only defined for ram == 1."""
        if self.ram != 1:
            raise ValueError("derivative in q needs an integral grid; use d_operator")
        cs = [c * (self.offset + i) for i, c in enumerate(self.coeffs)]
        prec = None if self.prec is None else self.prec - 1
        return PuiseuxSeries._raw(self.ring, 1, self.offset - 1, cs, prec)

    def d_operator(self, iterations: int = 1) -> PuiseuxSeries:
        """``(q d/dq)^iterations``: the coefficient at ``q^e`` gets multiplied by ``e^iterations``."""
        if iterations < 0:
            raise ValueError("iterations must be nonnegative")
        ring = self.ring
        cs = []
        for i, c in enumerate(self.coeffs):
            e = Fraction(self.offset + i, self.ram) ** iterations
            c = c * ring.coerce(e.numerator)
            cs.append(ring.div_int(c, e.denominator) if e.denominator != 1 else c)
        return PuiseuxSeries._raw(self.ring, self.ram, self.offset, cs, self.prec)

    def integral(self) -> PuiseuxSeries:
        """Formal antiderivative with zero constant term (ram == 1)."""
        if self.ram != 1:
            raise ValueError("integral needs an integral grid")
        if self.offset < 0 and self.coeff(-1) != self.ring.zero:
            raise ValueError("1/q term has no formal antiderivative")
        cs = {}
        for i, c in enumerate(self.coeffs):
            n = self.offset + i
            if c != self.ring.zero:
                cs[n + 1] = self.ring.div_int(c, n + 1)
        prec = None if self.prec is None else self.prec + 1
        return PuiseuxSeries.from_dict(cs, 1, prec, self.ring) if cs or prec is not None else PuiseuxSeries(ring=self.ring)

    def shift(self, k: int) -> PuiseuxSeries:
        """Multiply by ``q^(k/ram)``."""
        prec = None if self.prec is None else self.prec + k
        return PuiseuxSeries._raw(self.ring, self.ram, self.offset + k, list(self.coeffs), prec)

    def log(self) -> PuiseuxSeries:
        """Formal logarithm of a series with constant term 1."""
        if self.ram != 1 or self.offset != 0 or self.coeffs[0] != self.ring.one:
            raise ValueError("log needs a power series with constant term 1")
        return (self.derivative() / self).integral()

    def exp(self) -> PuiseuxSeries:
        """Formal exponential of a power series of positive valuation."""
        if self.ram != 1:
            raise ValueError("exp needs an integral grid")
        if self.coeffs and self.offset < 1:
            raise ValueError("exp needs positive valuation")
        if self.prec is None:
            raise ValueError("exp of an exact series needs a truncation")
        n = self.prec
        ring = self.ring
        if n <= 1:
            return PuiseuxSeries([ring.one], prec=n, ring=ring)
        h = [ring.one]
        k = 1
        while k < n:
            k = min(2 * k, n)
            hk = PuiseuxSeries(h, prec=k, ring=ring)
            # Newton step h <- h (1 + f - log h) doubles the correct prefix
            step = hk * (self.truncate(k) - hk.log() + 1)
            h = step.coefficients(0, k)
        return PuiseuxSeries(h, prec=n, ring=ring)

    def nth_root(self, n: int) -> PuiseuxSeries:
        """The n-th root whose leading coefficient is ``ring.nth_root(c0, n)``."""
        if n < 1:
            raise ValueError("root index must be positive")
        if n == 1:
            return self
        if not self.coeffs:
            raise ValueError("root of a series that vanishes to known precision")
        c0 = self.coeffs[0]
        r0 = self.ring.nth_root(c0, n)
        v = self.offset
        m = self.ram
        g = math.gcd(v, n)
        new_ram = m * (n // g)
        lead_index = v // g  # exponent v/(m n) == lead_index/new_ram
        if self.prec is None:
            raise ValueError("root of an exact series needs a truncation")
        rel = self.prec - v
        unit = [c * self.ring.inv(c0) for c in self.coeffs[:rel]]
        unit.extend([self.ring.zero] * (rel - len(unit)))
        root = _unit_root_coeffs(self.ring, unit, n, rel)
        root = [r0 * c for c in root]
        # the unit part lives on the old 1/m grid; respread onto 1/new_ram
        step = new_ram // m
        cs = []
        for c in root:
            cs.append(c)
            cs.extend([self.ring.zero] * (step - 1))
        prec = lead_index + rel * step
        cs = cs[: prec - lead_index]
        return PuiseuxSeries._raw(self.ring, new_ram, lead_index, cs, prec).reduce_ram()

    def compose(self, g: PuiseuxSeries) -> PuiseuxSeries:
        """``self(g)`` where self is a power series in x and g has positive valuation."""
        if self.ram != 1 or (self.coeffs and self.offset < 0):
            raise ValueError("outer series must be a power series on the integral grid")
        self._check_ring(g)
        vg = g.valuation
        if vg is math.inf or vg <= 0:
            raise ValueError("inner series must have positive valuation")
        ring = self.ring
        if self.prec is None and g.prec is None:
            cs = self.coefficients(0, self.offset + len(self.coeffs)) if self.coeffs else []
            result = PuiseuxSeries(ring=ring).with_ram(g.ram)
            for c in reversed(cs):
                result = result * g + c
            return result
        precs = []
        if self.prec is not None:
            precs.append(vg * self.prec)
        if g.prec is not None:
            # f(g + e) - f(g) = f'(g) e + ...
            first = next((self.offset + i for i, c in enumerate(self.coeffs)
                          if c != ring.zero and self.offset + i >= 1), self.prec)
            if first is not None:
                precs.append(g.prec + vg * (first - 1))
        prec = min(precs)
        top = -(-prec // vg)
        stop = top if self.prec is None else min(top, self.prec)
        cs = self.coefficients(0, stop)
        # padding g with zeros past its precision only perturbs terms beyond prec
        gc = [g.coeff(i) if g.prec is None or i < g.prec else ring.zero for i in range(prec)]
        out = _compose_coeffs(ring, cs, gc, prec)
        return PuiseuxSeries._raw(ring, g.ram, 0, out, prec)

    def revert(self) -> PuiseuxSeries:
        """Compositional inverse of ``x + higher terms``."""
        if self.ram != 1 or self.offset != 1 or self.coeffs[0] != self.ring.one:
            raise ValueError("reversion needs a series x + higher terms")
        if self.prec is None:
            raise ValueError("reversion of an exact series needs a truncation")
        n = self.prec
        ring = self.ring
        x = PuiseuxSeries.gen(ring=ring)
        h = PuiseuxSeries([ring.one], 1, 1, min(n, 2), ring)
        df = self.derivative()
        k = 2
        while k < n:
            k = min(2 * k, n)
            hk = PuiseuxSeries(h.coefficients(1, h.prec), 1, 1, k, ring)
            fk = self.truncate(k)
            err = fk.compose(hk) - x
            dfh = df.truncate(k - 1).compose(hk)
            h = (hk - (err / dfh)).truncate(k)
        return h.truncate(n)

    def up(self, p: int) -> PuiseuxSeries:
        """Atkin U_p on the index grid: ``a_n -> a_{pn}``."""
        if self.ram % p == 0:
            raise ValueError(f"U_{p} undefined when {p} divides the ramification {self.ram}")
        lo = -((-self.offset) // p) if self.coeffs else 0
        if self.prec is None:
            hi = (self.offset + len(self.coeffs) - 1) // p + 1 if self.coeffs else 0
            prec = None
        else:
            hi = -((-self.prec) // p)
            prec = hi
        cs = [self.coeff(p * n) for n in range(lo, hi)]
        return PuiseuxSeries._raw(self.ring, self.ram, lo, cs, prec)

    def vp(self, p: int) -> PuiseuxSeries:
        """V_p: ``q -> q^p``."""
        zero = self.ring.zero
        cs = []
        for c in self.coeffs:
            cs.append(c)
            cs.extend([zero] * (p - 1))
        prec = None if self.prec is None else self.prec * p
        if prec is not None:
            cs = cs[: prec - self.offset * p]
            cs.extend([zero] * (prec - self.offset * p - len(cs)))
        return PuiseuxSeries._raw(self.ring, self.ram, self.offset * p, cs, prec)

    def map_coefficients(self, fn, ring: CoeffRing | None = None) -> PuiseuxSeries:
        ring = ring or self.ring
        return PuiseuxSeries._raw(ring, self.ram, self.offset, [fn(c) for c in self.coeffs], self.prec)

    def change_ring(self, ring: CoeffRing) -> PuiseuxSeries:
        return self.map_coefficients(ring.coerce, ring)

    # -- serialisation ------------------------------------------------
    def to_json(self) -> dict:
        return {
            "ramification": self.ram,
            "offset": self.offset,
            "coefficients": [self.ring.element_to_json(c) for c in self.coeffs],
            "precision": self.prec,
            **self.ring.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict, ring: CoeffRing | None = None) -> PuiseuxSeries:
        if ring is None:
            ring = ring_from_json(data)
        cs = [ring.element_from_json(c) for c in data["coefficients"]]
        return cls(cs, data["offset"], data["ramification"], data["precision"], ring)


def _compose_coeffs(ring: CoeffRing, fc: list, gc: list, n: int) -> list:
    """First n coefficients of f(g) (g[0] = 0) by Paterson-Stockmeyer."""
    if not fc:
        return [ring.zero] * n
    if isinstance(ring, RationalField) and all(c.denominator == 1 for c in fc) and all(
        c.denominator == 1 for c in gc
    ):
        out = _compose_lists([int(c) for c in fc], [int(c) for c in gc], n, 0, 1, int_poly_mul)
        return [Fraction(c) for c in out]
    return _compose_lists(fc, gc, n, ring.zero, ring.one, ring.mul_coeffs)


def _compose_lists(fc, gc, n, zero, one, mul):
    m = max(1, math.isqrt(len(fc) - 1) + 1)
    powers = [[one] + [zero] * (n - 1)]
    for _ in range(m):
        powers.append(mul(powers[-1], gc, n))
    big = powers[m]
    result = None
    for j in reversed(range(0, len(fc), m)):
        block = [zero] * n
        for i, c in enumerate(fc[j:j + m]):
            if c:
                block = [b + c * x for b, x in zip(block, powers[i])]
        result = block if result is None else [a + b for a, b in zip(mul(result, big, n), block)]
    return result


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def series_inverse_coeffs(ring: CoeffRing, c: list, n: int) -> list:
    """First ``n`` coefficients of ``1/(c0 + c1 x + ...)`` (c0 a unit)."""
    if n <= 0:
        return []
    c = list(c[:n]) + [ring.zero] * max(0, n - len(c))
    inv0 = ring.inv(c[0])
    if n <= _SCHOOLBOOK_CUTOFF:
        h = [inv0]
        for i in range(1, n):
            s = ring.zero
            for j in range(1, i + 1):
                if c[j] != ring.zero:
                    s = s + c[j] * h[i - j]
            h.append(-s * inv0)
        return h
    h = [inv0]
    k = 1
    two = ring.coerce(2)
    while k < n:
        k2 = min(2 * k, n)
        e = ring.mul_coeffs(c[:k2], h, k2)
        e = [-x for x in e]
        e[0] = e[0] + two
        h = ring.mul_coeffs(h, e, k2)
        k = k2
    return h


def _unit_root_coeffs(ring: CoeffRing, u: list, n: int, prec: int) -> list:
    """``(1 + u1 x + ...)^(1/n)`` to ``prec`` terms by Newton on the inverse root."""
    if prec <= 0:
        return []
    u = list(u[:prec]) + [ring.zero] * max(0, prec - len(u))
    one = ring.one
    y = [one]
    k = 1
    while k < prec:
        k2 = min(2 * k, prec)
        yk = y + [ring.zero] * (k2 - len(y))
        yn = _pow_coeffs(ring, yk, n, k2)
        t = ring.mul_coeffs(u[:k2], yn, k2)  # (1+u) y^n
        t = [-x for x in t]
        t[0] = t[0] + one  # 1 - (1+u) y^n
        corr = ring.mul_coeffs(yk, t, k2)
        y = [a + ring.div_int(b, n) for a, b in zip(yk, corr)]
        k = k2
    ynm1 = _pow_coeffs(ring, y, n - 1, prec)
    return ring.mul_coeffs(u, ynm1, prec)


def _pow_coeffs(ring, a, e, n):
    result = [ring.one] + [ring.zero] * (n - 1)
    base = a
    while e:
        if e & 1:
            result = ring.mul_coeffs(result, base, n)
        e >>= 1
        if e:
            base = ring.mul_coeffs(base, base, n)
    return result


_RING_DECODERS = {"QQ": lambda data: QQ}


def register_ring_decoder(name: str, fn) -> None:
    _RING_DECODERS[name] = fn


def ring_from_json(data: dict) -> CoeffRing:
    name = data.get("ring", "QQ")
    try:
        return _RING_DECODERS[name](data)
    except KeyError:
        raise ValueError(f"unknown coefficient ring {name!r}") from None


# -- integer coefficient lists (exact or reduced mod a modulus) ----------

def _reduce(a, modulus):
    return a if modulus is None else [x % modulus for x in a]


def int_series_mul(a: list[int], b: list[int], n: int, modulus: int | None = None) -> list[int]:
    return _reduce(int_poly_mul(a, b, n), modulus)


def int_series_inverse(c: list[int], n: int, modulus: int | None = None) -> list[int]:
    """First n coefficients of 1/c for c[0] = +-1 (or a unit mod ``modulus``)."""
    if modulus is None:
        if c[0] not in (1, -1):
            raise ValueError("integer inverse needs constant term +-1")
        inv0 = c[0]
    else:
        inv0 = pow(c[0], -1, modulus)
    c = list(c[:n]) + [0] * max(0, n - len(c))
    h = [inv0]
    k = 1
    while k < n:
        k2 = min(2 * k, n)
        e = int_series_mul(c[:k2], h, k2, modulus)
        e = [-x for x in e]
        e[0] += 2
        h = int_series_mul(h, e, k2, modulus)
        k = k2
    return h[:n]


def int_series_pow(a: list[int], e: int, n: int, modulus: int | None = None) -> list[int]:
    """a^e truncated to n terms; negative e needs a[0] = +-1."""
    if e < 0:
        a = int_series_inverse(a, n, modulus)
        e = -e
    result = [1] + [0] * (n - 1)
    base = list(a[:n])
    while e:
        if e & 1:
            result = int_series_mul(result, base, n, modulus)
        e >>= 1
        if e:
            base = int_series_mul(base, base, n, modulus)
    return _reduce(result, modulus)

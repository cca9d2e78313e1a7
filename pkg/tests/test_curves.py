from fractions import Fraction

import pytest

from asd_forge.curves import (
    BadReduction,
    CurveSpec,
    charpoly_root_moduli,
    cm_certify,
    cm_scan,
    count_points,
    count_points_fp2,
    genus2_charpoly,
)


def brute_count(cubic, p):
    """Projective points of y^2 = cubic(x) by double enumeration."""
    n = 1
    for x in range(p):
        r = cubic(x) % p
        n += sum(1 for y in range(p) if (y * y - r) % p == 0)
    return n


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23])
def test_counts_against_brute_force(p):
    cases = [
        (CurveSpec.short_weierstrass(1, 0), lambda x: x ** 3 + x),
        (CurveSpec.legendre(-1), lambda x: x * (x - 1) * (x + 1)),
        (CurveSpec.legendre(2), lambda x: x * (x - 1) * (x - 2)),
    ]
    for curve, cubic in cases:
        data = count_points(curve, p)
        assert data.counts[1] == brute_count(cubic, p)
        assert data.trace ** 2 <= 4 * p


def test_supersingular_example():
    data = count_points(CurveSpec.legendre(2), 7)
    assert data.trace == 0 and not data.ordinary
    assert data.charpoly == (1, 0, 7)


def test_bad_reduction():
    with pytest.raises(BadReduction):
        count_points(CurveSpec.legendre(2), 2)
    with pytest.raises(ValueError):
        CurveSpec.legendre(1)


def test_parse_round_trip():
    for text in ("legendre:2", "short-weierstrass:1,0", "general-cubic:4,2", "tilde:-1"):
        assert str(CurveSpec.parse(text)) == text
    assert CurveSpec.parse("sw:1,0") == CurveSpec.short_weierstrass(1, 0)


@pytest.mark.parametrize("p", [3, 7, 13])
def test_genus2_charpoly(p):
    data = genus2_charpoly(p)
    assert data.charpoly == (1, 0, 0, 0, p * p)
    assert all(abs(m - p ** 0.5) < 1e-9 for m in charpoly_root_moduli(data))


def test_genus2_fp2_count_brute_force():
    # over F_9 by explicit enumeration of pairs
    p = 3
    nonres = 2  # F_9 = F_3[w], w^2 = 2
    def mul(a, b):
        return ((a[0] * b[0] + nonres * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)
    elems = [(a, b) for a in range(p) for b in range(p)]
    squares = {}
    for y in elems:
        s = mul(y, y)
        squares[s] = squares.get(s, 0) + 1
    n = 1
    for x in elems:
        x5 = mul(mul(mul(x, x), mul(x, x)), x)
        n += squares.get(((x5[0] + 2) % p, x5[1]), 0)
    poly = [(2, 0), (0, 0), (0, 0), (0, 0), (0, 0), (1, 0)]
    assert count_points_fp2(poly, p) == n


def test_genus2_bad_primes():
    for p in (2, 5):
        with pytest.raises(BadReduction):
            genus2_charpoly(p)


def test_cm_certificates():
    assert cm_certify(CurveSpec.short_weierstrass(1, 0)).certified
    cert = cm_certify(CurveSpec.general_cubic(4, 2))
    assert cert.certified and cert.field_discriminant == -8
    assert not cm_certify(CurveSpec.legendre(3)).certified


def test_cm_scan_legendre():
    lams = [Fraction(a, b) for a in range(-4, 5) for b in (1, 2) if Fraction(a, b) not in (0, 1)]
    found = sorted({c.curve.params[0] for c in cm_scan("legendre", sorted(set(lams)))})
    assert found == [-1, Fraction(1, 2), 2]


def test_cm_scan_tilde():
    box = [-8, -1, Fraction(-1, 8), Fraction(1, 64), Fraction(1, 4), 4, 64, 2, 3]
    found = {c.curve.params[0]: c.field_discriminant for c in cm_scan("tilde", box)}
    assert set(found) == {-8, -1, Fraction(-1, 8), Fraction(1, 64), Fraction(1, 4), 4, 64}

"""Independent reference computations used only by the tests.

Plain integer lists and schoolbook products, sharing no code with the package.
"""
from fractions import Fraction


def mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def sigma(n, k):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein(k, c, n):
    return [1] + [c * sigma(m, k - 1) for m in range(1, n)]


def delta(n):
    """tau(1..n-1) from 1728 Delta = E4^3 - E6^2 (index 0 holds tau(0) = 0)."""
    e4 = eisenstein(4, 240, n)
    e6 = eisenstein(6, -504, n)
    a = mul(mul(e4, e4, n), e4, n)
    b = mul(e6, e6, n)
    return [(x - y) // 1728 for x, y in zip(a, b)]


def power_product(exps, n):
    """prod_{m >= 1} (1 - x^m)^(exps(m)) to x^(n-1)."""
    out = [1] + [0] * (n - 1)
    for m in range(1, n):
        e = exps(m)
        if e == 0:
            continue
        # multiply by (1 - x^m)^e via the binomial series
        fac = [0] * n
        c = Fraction(1)
        k = 0
        while k * m < n:
            fac[k * m] = c * (-1) ** k
            c = c * (e - k) / (k + 1)
            k += 1
        out = mul(out, fac, n)
    return out


def weak_g(n):
    """Coefficients of q^-1 .. q^(n-2) of E4^6/Delta - 1464 E4^3."""
    m = n + 1
    e4 = eisenstein(4, 240, m)
    e4_3 = mul(mul(e4, e4, m), e4, m)
    e4_6 = mul(e4_3, e4_3, m)
    # Delta / q = prod (1 - q^k)^24
    d = power_product(lambda k: 24, m)
    inv = [Fraction(1)] + [Fraction(0)] * (m - 1)
    for i in range(1, m):
        inv[i] = -sum(d[j] * inv[i - j] for j in range(1, i + 1))
    g = mul(e4_6, inv, m)  # this is q * E4^6/Delta
    return [g[0]] + [g[i + 1] - 1464 * e4_3[i] for i in range(m - 2)]

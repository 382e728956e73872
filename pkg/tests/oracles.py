"""Independent reference computations used by the tests.

Nothing here calls the closed forms under test: Farey sequences are
enumerated by brute force, integrals come from adaptive quadrature of the
pointwise kernel, and the Brownian MMD is evaluated in exact arithmetic.
"""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from fareymmd.quadrature import QuadratureConfig, integrate, integrate2d

TIGHT = QuadratureConfig(abs_tol=1e-13, max_depth=50)


def brute_farey(n: int) -> list[Fraction]:
    return sorted({Fraction(a, b) for b in range(1, n + 1) for a in range(b + 1)})


def brute_farey_pairs(n: int) -> list[tuple[int, int]]:
    """Enumerate-reduce-sort on integer pairs.

    Distinct fractions with denominators <= n differ by at least 1/n^2, far
    above float rounding for any n this is used with, so a float sort key
    orders them exactly.
    """
    pairs = set()
    for b in range(1, n + 1):
        for a in range(b + 1):
            g = math.gcd(a, b)
            pairs.add((a // g, b // g))
    return sorted(pairs, key=lambda p: p[0] / p[1])


def brute_phi(k: int) -> int:
    return sum(1 for j in range(1, k + 1) if math.gcd(j, k) == 1)


def quad_embedding(kernel, y: float, cfg: QuadratureConfig = TIGHT) -> float:
    return integrate(lambda x: kernel(x, np.full_like(x, y)), 0.0, 1.0, cfg, (y,))


def quad_double(kernel, cfg: QuadratureConfig = TIGHT) -> float:
    return integrate2d(lambda x, y: kernel(np.full_like(y, x), y), cfg, split_diagonal=True)


def quad_mmd_squared(kernel, xs, cfg: QuadratureConfig = TIGHT) -> float:
    """All three terms of the squared MMD, with both integrals by quadrature."""
    xs = np.asarray(xs, dtype=float)
    N = len(xs)
    embed = sum(quad_embedding(kernel, float(x), cfg) for x in xs)
    gram = float(np.sum(kernel(xs[:, None], xs[None, :])))
    return quad_double(kernel, cfg) - 2 * embed / N + gram / N**2


def brownian_mmd_exact(points) -> Fraction:
    """Squared MMD for K = 1 + min(x, y) in rational arithmetic."""
    pts = [Fraction(p) for p in points]
    N = len(pts)
    embed = sum(1 + y - y * y / 2 for y in pts)
    gram = sum(1 + min(x, y) for x in pts for y in pts)
    return Fraction(4, 3) - 2 * embed / N + gram / N**2


def matern_mp(nu: Fraction, lam: float, d):
    r = mpmath.sqrt(2 * mpmath.mpf(nu.numerator) / nu.denominator) * abs(d) / mpmath.mpf(lam)
    poly = {Fraction(1, 2): 1, Fraction(3, 2): 1 + r, Fraction(5, 2): 1 + r + r * r / 3}[nu]
    return poly * mpmath.exp(-r)


def matern_mmd_mp(nu: Fraction, lam: float, points, dps: int = 30):
    """Squared MMD of a Matern kernel by high-precision brute force.

    The integrals are done by mpmath.quad on the pieces either side of the
    kink, so no closed form enters.
    """
    with mpmath.workdps(dps):
        xs = [mpmath.mpf(p.numerator) / p.denominator for p in map(Fraction, points)]
        N = len(xs)

        def emb(y):
            k = lambda x: matern_mp(nu, lam, x - y)
            return mpmath.quad(k, [0, y]) + mpmath.quad(k, [y, 1])

        double = mpmath.quad(lambda y: emb(y), [0, 1])
        embed = mpmath.fsum(emb(y) for y in xs)
        gram = mpmath.fsum(matern_mp(nu, lam, x - y) for x in xs for y in xs)
        return double - 2 * embed / N + gram / N**2

"""Squared MMDs against the uniform measure on [0, 1] and exact discrepancy statistics.

All three MMD routes evaluate

    MMD(X)^2 = int int K - (2/N) sum_i int K(x, x_i) dx + (1/N^2) sum_{i,j} K(x_i, x_j)

and differ only in how the Gram sum is formed.  For Farey sequences the
result is of order n^-3 while each term is of order one: kernel values are
evaluated in ``np.longdouble`` and the large totals are added exactly as
dyadic rationals, so a single rounding happens at the very end.  Plain
float64 leaves roughly eight correct digits at n = 250.

Exact statistics use Python integers, so they cannot overflow; int64 numpy
arithmetic is used only when an a priori bound shows the sums fit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .farey import FareySequence, Rational
from .kernels import (
    BrownianShift,
    DistanceForm,
    Kernel,
    KernelSpec,
    PolynomialForm,
    _unit_interval,
    make_kernel,
)

LD = np.longdouble
NEGATIVE_TOL = 1e-10
_INT64_SAFE = 2**62


class NumericalConsistencyError(ArithmeticError):
    """A squared MMD came out below -NEGATIVE_TOL."""


class UnsupportedKernelError(ValueError):
    pass


class Lemma1PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class MmdResult:
    mmd_squared: float
    method: str
    kernel_id: str
    n: int | None
    N: int
    exact: Fraction | None = None

    @property
    def mmd(self) -> float:
        return math.sqrt(max(self.mmd_squared, 0.0))


@dataclass(frozen=True)
class DiscrepancyStats:
    franel_sum: Fraction
    l2_discretized: float
    mikolas_error_x2: Fraction


# -- exact statistics -------------------------------------------------------


def _exact(X) -> tuple[np.ndarray, np.ndarray]:
    """Numerators and denominators, int64 when small enough, else Python ints."""
    if isinstance(X, FareySequence):
        return X.num, X.den
    pts = []
    for p in X:
        if isinstance(p, Rational):
            pts.append(p)
        elif isinstance(p, (Fraction, int)) and not isinstance(p, bool):
            pts.append(Rational.from_fraction(p))
        else:
            raise TypeError(f"exact statistics need rationals, got {p!r}")
    nums = [p.num for p in pts]
    dens = [p.den for p in pts]
    big = max((abs(v) for v in nums + dens), default=0) >= 2**31
    dtype = object if big else np.int64
    return np.array(nums, dtype=dtype), np.array(dens, dtype=dtype)


def _require_sorted(num, den) -> None:
    if np.any(num[:-1] * den[1:] > num[1:] * den[:-1]):
        raise ValueError("points must be sorted in increasing order")


def _grouped(values: np.ndarray, den: np.ndarray, bound: int) -> dict[int, int]:
    """Sum of ``values`` per denominator, exactly."""
    if values.dtype != object and bound < _INT64_SAFE:
        order = np.argsort(den, kind="stable")
        d = den[order]
        starts = np.flatnonzero(np.r_[True, d[1:] != d[:-1]])
        sums = np.add.reduceat(values[order], starts)
        return {int(q): int(s) for q, s in zip(d[starts], sums)}
    groups: dict[int, int] = {}
    for v, q in zip(values, den):
        groups[int(q)] = groups.get(int(q), 0) + int(v)
    return groups


def franel_sum(X: FareySequence | Sequence) -> Fraction:
    """Exact sum_i (i/N - x_i)^2 for sorted rational points."""
    num, den = _exact(X)
    N = len(num)
    if N == 0:
        raise ValueError("empty point set")
    if not isinstance(X, FareySequence):
        _require_sorted(num, den)
    peak = N * max(int(np.max(den)), int(np.max(np.abs(num))))
    # (i q - N p)^2 summed over at most N points with the same q
    bound = N * peak * peak
    if num.dtype != object and bound >= _INT64_SAFE:
        num, den = num.astype(object), den.astype(object)
    idx = np.arange(1, N + 1, dtype=num.dtype)
    dev = idx * den - N * num
    groups = _grouped(dev * dev, den, bound)
    total = sum((Fraction(s, q * q) for q, s in groups.items()), Fraction(0))
    return total / (N * N)


def l2_discretized(X: FareySequence | Sequence) -> float:
    """Discretised L2-discrepancy sqrt(franel_sum / N)."""
    N = len(X)
    return math.sqrt(float(franel_sum(X) / N))


def mikolas_error_x2(X: FareySequence | Sequence) -> Fraction:
    """Exact |1/3 - (1/N) sum_i x_i^2|, the quadrature error of f(x) = x^2."""
    num, den = _exact(X)
    N = len(num)
    if N == 0:
        raise ValueError("empty point set")
    bound = N * int(np.max(np.abs(num))) ** 2
    if num.dtype != object and bound >= _INT64_SAFE:
        num, den = num.astype(object), den.astype(object)
    groups = _grouped(num * num, den, bound)
    mean_sq = sum((Fraction(s, q * q) for q, s in groups.items()), Fraction(0)) / N
    return abs(Fraction(1, 3) - mean_sq)


def discrepancy_stats(X: FareySequence | Sequence) -> DiscrepancyStats:
    fr = franel_sum(X)
    return DiscrepancyStats(fr, math.sqrt(float(fr / len(X))), mikolas_error_x2(X))


# -- squared MMD ------------------------------------------------------------


def _as_kernel(kernel: Kernel | KernelSpec | str) -> Kernel:
    return kernel if isinstance(kernel, Kernel) else make_kernel(kernel)


def _points(X) -> tuple[np.ndarray, int | None]:
    if isinstance(X, FareySequence):
        return X.values(LD), X.n
    if isinstance(X, np.ndarray):
        xs = X.astype(LD)
    else:
        xs = np.array(
            [LD(p.num) / LD(p.den) if isinstance(p, Rational)
             else LD(p.numerator) / LD(p.denominator) if isinstance(p, Fraction)
             else LD(p) for p in X],
            dtype=LD,
        )
    if xs.ndim != 1 or len(xs) == 0:
        raise ValueError("need a non-empty one-dimensional point set")
    return _unit_interval(xs, "points"), None


def _exact_sum(values) -> Fraction:
    """Exact sum of longdouble values (each is a dyadic rational)."""
    pairs = [v.as_integer_ratio() for v in np.asarray(values, dtype=LD).ravel()]
    if not pairs:
        return Fraction(0)
    scale = max(d for _, d in pairs)
    return Fraction(sum(p * (scale // d) for p, d in pairs), scale)


def _finish(kernel: Kernel, xs, gram: Fraction, method: str, n) -> MmdResult:
    # only the final conversion rounds; the O(1) terms cancel down to O(n^-3)
    N = len(xs)
    emb = _exact_sum(kernel._embed(xs))
    di = Fraction(*kernel.double_integral(precise=True).as_integer_ratio())
    value = float(di - 2 * emb / N + gram / (N * N))
    if value < -NEGATIVE_TOL:
        raise NumericalConsistencyError(
            f"squared MMD {value:.3e} for {kernel.kernel_id} is below -{NEGATIVE_TOL}"
        )
    return MmdResult(value, method, kernel.kernel_id, n, N)


def mmd_squared_naive(kernel, X) -> MmdResult:
    """Closed form with an O(N^2) Gram sum (diagonal plus twice the upper triangle).

    Each row of the upper triangle is summed pairwise in longdouble and the
    row totals are then added exactly.
    """
    kernel = _as_kernel(kernel)
    xs, n = _points(X)
    N = len(xs)
    rows = np.zeros(N, dtype=LD)
    for i in range(N - 1):
        rows[i] = np.sum(kernel._k(xs[i], xs[i + 1:]))
    gram = _exact_sum(kernel._k(xs, xs)) + 2 * _exact_sum(rows)
    return _finish(kernel, xs, gram, "naive", n)


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _upper_terms_distance(form: DistanceForm, xs: np.ndarray) -> np.ndarray:
    """Per-j sums sum_{i<j} K(x_i, x_j) for K = exp(-alpha d) sum_k c_k d^k.

    moments[k] = sum_{i<j} d_ij^k exp(-alpha d_ij) is advanced one point at a
    time: add the previous point at distance 0, shift all distances by the
    gap g, then damp by exp(-alpha g) = 1 + expm1(-alpha g).  Every update
    adds a small, accurately computed increment to a large running value, so
    the moments are carried as (hi, lo) pairs; exponents are never positive.
    """
    T = len(form.coeffs)
    coeffs = list(form.coeffs)
    binom = [[math.comb(k, l) for l in range(k + 1)] for k in range(T)]
    gaps = np.diff(xs)
    shrink = np.expm1(-form.alpha * gaps)
    hi = [LD(0)] * T
    lo = [LD(0)] * T
    terms = np.empty(len(gaps), dtype=LD)
    for j, (g, u) in enumerate(zip(gaps, shrink)):
        hi[0], r = _two_sum(hi[0], LD(1))
        lo[0] += r
        gp = [LD(1)]
        for _ in range(1, T):
            gp.append(gp[-1] * g)
        for k in range(T - 1, 0, -1):
            step = sum(binom[k][l] * gp[k - l] * (hi[l] + lo[l]) for l in range(k))
            hi[k], r = _two_sum(hi[k], step)
            lo[k] += r
        for k in range(T):
            hi[k], r = _two_sum(hi[k], u * (hi[k] + lo[k]))
            lo[k] += r
        terms[j] = sum(c * h for c, h in zip(coeffs, hi)) + sum(c * l for c, l in zip(coeffs, lo))
    return terms


def _upper_terms_polynomial(form: PolynomialForm, xs: np.ndarray) -> np.ndarray:
    """Per-j sums sum_{i<j} sum_{a,b} C[a,b] x_i^a x_j^b via compensated prefix sums."""
    A = form.coeffs.shape[0]
    powers = np.ones((len(xs), A), dtype=LD)
    for a in range(1, A):
        powers[:, a] = powers[:, a - 1] * xs
    prefix = np.zeros_like(powers)
    run = np.zeros(A, dtype=LD)
    comp = np.zeros(A, dtype=LD)
    for j in range(1, len(xs)):
        y = powers[j - 1] - comp
        t = run + y
        comp = (t - run) - y
        run = t
        prefix[j] = run
    return ((prefix @ form.coeffs) * powers).sum(axis=1)


def mmd_squared_fast(kernel, X) -> MmdResult:
    """O(N) Gram sum for sorted points and kernels with a separable upper triangle."""
    kernel = _as_kernel(kernel)
    form = kernel.fast_form()
    if form is None:
        raise UnsupportedKernelError(f"no fast path for kernel {kernel.kernel_id}")
    xs, n = _points(X)
    if np.any(np.diff(xs) < 0):
        raise ValueError("fast path needs points sorted in increasing order")
    if isinstance(form, DistanceForm):
        upper = _upper_terms_distance(form, xs)
    else:
        upper = _upper_terms_polynomial(form, xs)
    gram = _exact_sum(kernel._k(xs, xs)) + 2 * _exact_sum(upper)
    return _finish(kernel, xs, gram, "fast", n)


def _lemma1_violation(num, den) -> str | None:
    N = len(num)
    if N % 2 == 0:
        return f"N = {N} is even"
    if not np.any(2 * num == den):
        return "the points do not contain 1/2"
    if np.any(num[:-1] * den[1:] > num[1:] * den[:-1]):
        return "the points are not sorted"
    rn, rd = num[::-1], den[::-1]
    if not np.all(num * rd + rn * den == den * rd):
        return "the points are not symmetric about 1/2"
    return None


def mmd_lemma1(X: FareySequence | Sequence) -> MmdResult:
    """Squared MMD for K(x, y) = 1 + min(x, y) from the exact Franel sum.

    Valid for sorted point sets of odd size that contain 1/2 and are
    symmetric under x -> 1 - x; there the value is
    franel_sum / N - 1 / (6 N^2).
    """
    num, den = _exact(X)
    if len(num) == 0:
        raise ValueError("empty point set")
    problem = _lemma1_violation(num, den)
    if problem:
        raise Lemma1PreconditionError(problem)
    N = len(num)
    exact = franel_sum(X) / N - Fraction(1, 6 * N * N)
    n = X.n if isinstance(X, FareySequence) else None
    return MmdResult(float(exact), "lemma1", "brownian", n, N, exact=exact)


def mmd_squared(kernel, X, method: str = "auto") -> MmdResult:
    """Squared MMD by ``method`` in {auto, naive, fast, lemma1}.

    ``auto`` prefers the exact lemma1 route for the Brownian kernel on
    qualifying rational inputs, then the fast path, then the naive sum.
    """
    kernel = _as_kernel(kernel)
    if method == "naive":
        return mmd_squared_naive(kernel, X)
    if method == "fast":
        return mmd_squared_fast(kernel, X)
    if method == "lemma1":
        if not isinstance(kernel, BrownianShift):
            raise UnsupportedKernelError("lemma1 applies to the brownian kernel only")
        return mmd_lemma1(X)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if isinstance(kernel, BrownianShift) and _is_exact(X):
        num, den = _exact(X)
        if _lemma1_violation(num, den) is None:
            return mmd_lemma1(X)
    if kernel.fast_form() is not None:
        xs, _ = _points(X)
        if not np.any(np.diff(xs) < 0):
            return mmd_squared_fast(kernel, X)
    return mmd_squared_naive(kernel, X)


def _is_exact(X) -> bool:
    if isinstance(X, FareySequence):
        return True
    if isinstance(X, np.ndarray):
        return False
    return all(isinstance(p, (Rational, Fraction)) for p in X)

"""Kernels on [0, 1] with closed-form integrals against the uniform measure.

Every kernel exposes its pointwise value, the mean embedding
``y -> int_0^1 K(x, y) dx`` and the double integral ``int int K``.  The
formulas follow the dtype of their input, so float64 arguments give float64
results and ``np.longdouble`` arguments are evaluated in extended precision
(the MMD routines rely on the latter).

Derivations of the integrals
----------------------------
brownian_shift, K(x, y) = 1 + min(x, y):
    embedding 1 + y - y^2/2, double integral 4/3.

matern, half-integer order, K = p(r) exp(-r) with r = alpha |x - y| and
alpha = sqrt(2 nu) / lambda; p = 1, 1 + r, 1 + r + r^2/3 for nu = 1/2, 3/2, 5/2.
    With G(t) = int_0^t p(alpha s) exp(-alpha s) ds
              = (1/alpha) sum_k c_k gamma(k + 1, alpha t)
    (gamma the lower incomplete gamma function), the embedding is
    G(y) + G(1 - y).  Integrating once more,
    int_0^1 G(t) dt = int_0^1 (1 - s) g(s) ds, so the double integral is
    (2/alpha) sum_k c_k [gamma(k + 1, alpha) - gamma(k + 2, alpha) / alpha].

integrated_bm, K = sum_{k<=m} (xy)^k / k!^2 + int_0^1 (x-t)_+^m (y-t)_+^m dt / m!^2:
    for x <= y, writing (y - t) = (y - x) + (x - t) gives
    int_0^x ... dt = sum_l C(m, l) (y - x)^l x^(2m - l + 1) / (2m - l + 1).
    Swapping the order of integration and expanding (1 - t) = (1 - y) + (y - t),
    the embedding is sum_k y^k / (k!^2 (k+1))
      + sum_{j<=m+1} C(m+1, j) (1-y)^(m+1-j) y^(m+j+1) / (m+j+1) / (m!^2 (m+1)),
    and the double integral is
    sum_k 1 / (k!^2 (k+1)^2) + 1 / (m!^2 (m+1)^2 (2m+3)).

exp_product, K = exp(xy):
    embedding expm1(y) / y (Taylor series near 0), double integral
    sum_{k>=1} 1 / (k k!).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

LD = np.longdouble

FAMILIES = ("brownian_shift", "matern", "integrated_bm", "exp_product")
MATERN_POLY = {
    Fraction(1, 2): (Fraction(1),),
    Fraction(3, 2): (Fraction(1), Fraction(1)),
    Fraction(5, 2): (Fraction(1), Fraction(1), Fraction(1, 3)),
}
MAX_FOLD = 10
_EXP_TAYLOR_CUTOFF = 1e-4


class KernelDomainError(ValueError):
    pass


def _ld(value) -> np.longdouble:
    if isinstance(value, Fraction):
        return LD(value.numerator) / LD(value.denominator)
    return LD(value)


def _unit_interval(value, name: str) -> np.ndarray:
    arr = np.asarray(value)
    if arr.dtype.kind not in "f":
        arr = arr.astype(np.float64)
    if not np.all((arr >= 0) & (arr <= 1)):
        raise KernelDomainError(f"{name} must lie in [0, 1]")
    return arr


def _cast(const, like: np.ndarray):
    return like.dtype.type(const)


@dataclass(frozen=True)
class KernelSpec:
    family: str
    nu: Fraction | None = None
    lam: float | None = None
    m: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.family == "matern":
            nu = Fraction(self.nu) if self.nu is not None else None
            if nu not in MATERN_POLY:
                raise ValueError(f"Matern order must be 1/2, 3/2 or 5/2, got {self.nu}")
            object.__setattr__(self, "nu", nu)
            lam = math.sqrt(2 * nu) if self.lam is None else float(self.lam)
            if not lam > 0 or not math.isfinite(lam):
                raise ValueError(f"correlation length must be positive, got {self.lam}")
            object.__setattr__(self, "lam", lam)
        if self.family == "integrated_bm":
            if self.m is None or int(self.m) != self.m or not 0 <= self.m <= MAX_FOLD:
                raise ValueError(f"fold count m must be an integer in [0, {MAX_FOLD}]")
            object.__setattr__(self, "m", int(self.m))

    @property
    def kernel_id(self) -> str:
        if self.family == "brownian_shift":
            return "brownian"
        if self.family == "matern":
            return f"matern{self.nu.numerator}{self.nu.denominator}"
        if self.family == "integrated_bm":
            return f"ibm{self.m}"
        return "expxy"

    @classmethod
    def parse(cls, text: str) -> "KernelSpec":
        """Parse a CLI identifier such as ``matern32`` or ``matern32:1.5``."""
        name, sep, lam = text.strip().partition(":")
        if sep and not name.startswith("matern"):
            raise ValueError(f"only Matern kernels take a correlation length: {text!r}")
        if name == "brownian":
            return cls("brownian_shift")
        if name == "expxy":
            return cls("exp_product")
        if name in ("matern12", "matern32", "matern52"):
            nu = Fraction(int(name[-2]), int(name[-1]))
            return cls("matern", nu=nu, lam=float(lam) if sep else None)
        if name.startswith("ibm") and name[3:].isdigit():
            return cls("integrated_bm", m=int(name[3:]))
        raise ValueError(f"unknown kernel identifier {text!r}")


@dataclass(frozen=True)
class DistanceForm:
    """K(x, y) = exp(-alpha d) * sum_k coeffs[k] d^k with d = |x - y|."""

    alpha: np.longdouble
    coeffs: np.ndarray


@dataclass(frozen=True)
class PolynomialForm:
    """K(x, y) = sum_{a,b} coeffs[a, b] x^a y^b whenever x <= y."""

    coeffs: np.ndarray


class Kernel:
    spec: KernelSpec

    @property
    def kernel_id(self) -> str:
        return self.spec.kernel_id

    def __call__(self, x, y):
        return self._k(_unit_interval(x, "x"), _unit_interval(y, "y"))

    eval = __call__

    def mean_embedding(self, y):
        return self._embed(_unit_interval(y, "y"))

    def double_integral(self, precise: bool = False):
        """The double integral; ``precise=True`` returns the longdouble value."""
        return self._double if precise else float(self._double)

    def fast_form(self) -> DistanceForm | PolynomialForm | None:
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec})"

    # subclasses: _k(x, y), _embed(y) on validated arrays, _double (longdouble)


class BrownianShift(Kernel):
    def __init__(self, spec: KernelSpec | None = None):
        self.spec = spec or KernelSpec("brownian_shift")
        self._double = LD(4) / LD(3)

    def _k(self, x, y):
        return 1 + np.minimum(x, y)

    def _embed(self, y):
        return 1 + 0.5 * (2 - y) * y

    def fast_form(self):
        return PolynomialForm(np.array([[1, 0], [1, 0]], dtype=LD))


def _lower_gamma(k: int, r: np.ndarray) -> np.ndarray:
    """gamma(k + 1, r) = int_0^r t^k e^-t dt for integer k >= 0 and r >= 0."""
    r = np.asarray(r)
    out = np.empty_like(r)
    small = r < k + 1
    if np.any(small):
        # k! e^-r sum_{i>k} r^i / i!, free of cancellation for small r
        rs = r[small]
        term = rs ** (k + 1) / (k + 1)
        total = term.copy()
        for i in range(k + 2, k + 80):
            term = term * rs / i
            total = total + term
        out[small] = total * np.exp(-rs)
    if np.any(~small):
        rb = r[~small]
        term = np.ones_like(rb)
        partial = term.copy()
        for i in range(1, k + 1):
            term = term * rb / i
            partial = partial + term
        out[~small] = math.factorial(k) * (1 - np.exp(-rb) * partial)
    return out


class Matern(Kernel):
    def __init__(self, spec: KernelSpec):
        self.spec = spec
        self.alpha = np.sqrt(_ld(2 * spec.nu)) / LD(spec.lam)
        self._poly = [_ld(c) for c in MATERN_POLY[spec.nu]]
        a = self.alpha
        self._double = (2 / a) * sum(
            c * (_lower_gamma(k, np.array([a]))[0] - _lower_gamma(k + 1, np.array([a]))[0] / a)
            for k, c in enumerate(self._poly)
        )

    def _k(self, x, y):
        x, y = np.broadcast_arrays(x, y)
        r = _cast(self.alpha, x) * np.abs(x - y)
        p = np.zeros_like(r)
        for c in reversed(self._poly):
            p = p * r + _cast(c, r)
        return p * np.exp(-r)

    def _G(self, t):
        a = _cast(self.alpha, t)
        total = np.zeros_like(t)
        for k, c in enumerate(self._poly):
            total = total + _cast(c, t) * _lower_gamma(k, a * t)
        return total / a

    def _embed(self, y):
        return self._G(y) + self._G(1 - y)

    def fast_form(self):
        coeffs = np.array([c * self.alpha**k for k, c in enumerate(self._poly)], dtype=LD)
        return DistanceForm(self.alpha, coeffs)


class IntegratedBrownian(Kernel):
    """Released m-fold integrated Brownian motion kernel."""

    def __init__(self, spec: KernelSpec):
        self.spec = spec
        m = spec.m
        mf2 = math.factorial(m) ** 2
        self._diag = [Fraction(1, math.factorial(k) ** 2) for k in range(m + 1)]
        self._tail = [Fraction(math.comb(m, l), (2 * m - l + 1) * mf2) for l in range(m + 1)]
        self._emb_poly = [Fraction(1, math.factorial(k) ** 2 * (k + 1)) for k in range(m + 1)]
        self._emb_tail = [
            Fraction(math.comb(m + 1, j), (m + j + 1) * mf2 * (m + 1)) for j in range(m + 2)
        ]
        self.exact_double = sum(
            (Fraction(1, math.factorial(k) ** 2 * (k + 1) ** 2) for k in range(m + 1)),
            Fraction(1, mf2 * (m + 1) ** 2 * (2 * m + 3)),
        )
        self._double = _ld(self.exact_double)

    def _k(self, x, y):
        m = self.spec.m
        lo, hi = np.minimum(x, y), np.maximum(x, y)
        s = x * y
        poly = np.zeros_like(s)
        for c in reversed(self._diag):
            poly = poly * s + _cast(_ld(c), s)
        # products instead of ** keep longdouble evaluation fast
        lo_pow = [np.ones_like(s)]
        for _ in range(2 * m + 1):
            lo_pow.append(lo_pow[-1] * lo)
        gap = hi - lo
        gap_pow = np.ones_like(s)
        tail = np.zeros_like(s)
        for l, c in enumerate(self._tail):
            tail = tail + _cast(_ld(c), s) * gap_pow * lo_pow[2 * m - l + 1]
            gap_pow = gap_pow * gap
        return poly + tail

    def _embed(self, y):
        m = self.spec.m
        poly = np.zeros_like(y)
        for c in reversed(self._emb_poly):
            poly = poly * y + _cast(_ld(c), y)
        tail = np.zeros_like(y)
        for j, c in enumerate(self._emb_tail):
            tail = tail + _cast(_ld(c), y) * (1 - y) ** (m + 1 - j) * y ** (m + j + 1)
        return poly + tail

    def fast_form(self):
        m = self.spec.m
        if m > 2:
            return None  # monomial expansion of (y - x)^l cancels badly beyond this
        coeffs = [[Fraction(0)] * (2 * m + 2) for _ in range(2 * m + 2)]
        for k, c in enumerate(self._diag):
            coeffs[k][k] += c
        for l, c in enumerate(self._tail):
            for b in range(l + 1):
                coeffs[2 * m + 1 - b][b] += c * math.comb(l, b) * (-1) ** (l - b)
        return PolynomialForm(np.array([[_ld(c) for c in row] for row in coeffs], dtype=LD))


class ExpProduct(Kernel):
    def __init__(self, spec: KernelSpec | None = None):
        self.spec = spec or KernelSpec("exp_product")
        total, term, k = LD(0), LD(1), 1
        while True:
            term = term / k  # 1/k!
            inc = term / k
            if inc < np.finfo(LD).eps * total:
                break
            total += inc
            k += 1
        self._double = total

    def _k(self, x, y):
        return np.exp(x * y)

    def _embed(self, y):
        near = np.abs(y) < _EXP_TAYLOR_CUTOFF
        safe = np.where(near, 1, y)
        taylor = 1 + y * (1 / 2 + y * (1 / 6 + y / 24))
        return np.where(near, taylor, np.expm1(safe) / safe)


def make_kernel(spec: KernelSpec | str) -> Kernel:
    if isinstance(spec, str):
        spec = KernelSpec.parse(spec)
    return {
        "brownian_shift": BrownianShift,
        "matern": Matern,
        "integrated_bm": IntegratedBrownian,
        "exp_product": ExpProduct,
    }[spec.family](spec)

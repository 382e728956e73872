"""Rate diagnostics for MMDs of Farey sequences.

Outputs are empirical diagnostics only: a fitted slope near -3/2 on a finite
range of n says nothing definite about the asymptotic statement it mirrors.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .farey import farey_sequence, farey_size
from .kernels import Kernel, KernelSpec, make_kernel
from .mmd import MmdResult, mmd_squared

TARGET_SLOPE = -1.5


@dataclass(frozen=True)
class CurvePoint:
    n: int
    N: int
    value: float
    normalized: float


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    residual_l2: float
    n_range: tuple[int, int]
    quantity: str = "mmd"


def farey_mmds(
    kernel: Kernel | KernelSpec | str,
    n_max: int,
    n_min: int = 2,
    method: str = "auto",
    threads: int = 1,
) -> list[MmdResult]:
    """MMD results for F_n, n_min <= n <= n_max, in increasing n.

    F_{n_max} is generated once and each F_n is read off as the subsequence
    with denominators <= n.  Work is split across ``threads``; each n is
    computed independently, so the results do not depend on the schedule.
    """
    if n_min < 1 or n_max < n_min:
        raise ValueError(f"need 1 <= n_min <= n_max, got {n_min}, {n_max}")
    if not isinstance(kernel, Kernel):
        kernel = make_kernel(kernel)
    top = farey_sequence(n_max)

    def one(n: int) -> MmdResult:
        return mmd_squared(kernel, top.restrict(n), method=method)

    ns = range(n_min, n_max + 1)
    if threads <= 1:
        return [one(n) for n in ns]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, ns))


def normalized_curve(
    kernel: Kernel | KernelSpec | str,
    n_max: int,
    n_min: int = 2,
    threads: int = 1,
) -> list[CurvePoint]:
    """MMD(F_n) and MMD(F_n) * n^(3/2) for n = n_min..n_max."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    return [
        CurvePoint(r.n, r.N, r.mmd, r.mmd * r.n**1.5)
        for r in farey_mmds(kernel, n_max, n_min, threads=threads)
    ]


def default_window(n_max: int) -> tuple[int, int]:
    """Fit window [max(50, n_max // 5), n_max], skipping pre-asymptotic n."""
    return max(50, n_max // 5), n_max


def rate_fit(
    curve: list[CurvePoint],
    n_lo: int | None = None,
    n_hi: int | None = None,
    quantity: str = "mmd",
) -> RateFit:
    """Least-squares line through (log n, log value) over n_lo <= n <= n_hi."""
    if n_lo is None or n_hi is None:
        lo, hi = default_window(max(p.n for p in curve))
        n_lo = lo if n_lo is None else n_lo
        n_hi = hi if n_hi is None else n_hi
    if n_lo >= n_hi:
        raise ValueError(f"need n_lo < n_hi, got {n_lo}, {n_hi}")
    pts = [p for p in curve if n_lo <= p.n <= n_hi]
    if len(pts) < 3:
        raise ValueError(f"fit needs at least 3 points in [{n_lo}, {n_hi}]")
    if any(not p.value > 0 for p in pts):
        raise ValueError("rate fit needs strictly positive values")
    x = np.log([p.n for p in pts])
    y = np.log([p.value for p in pts])
    dx = x - x.mean()
    slope = float(dx @ (y - y.mean()) / (dx @ dx))
    intercept = float(y.mean() - slope * x.mean())
    residual = float(np.linalg.norm(y - (intercept + slope * x)))
    return RateFit(slope, intercept, residual, (n_lo, n_hi), quantity)


def mertens_ratio(n: int) -> float:
    """|F_n| divided by its asymptotic size 3 n^2 / pi^2."""
    return farey_size(n) * math.pi**2 / (3 * n * n)


def planted_curve(exponent: float, n_max: int, scale: float = 1.0) -> list[CurvePoint]:
    """Synthetic curve value = scale * n^exponent, for checking the fit itself."""
    return [
        CurvePoint(n, farey_size(n), scale * n**exponent, scale * n ** (exponent + 1.5))
        for n in range(2, n_max + 1)
    ]

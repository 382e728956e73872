"""Adaptive Gauss-Legendre quadrature used as an independent oracle.

Each panel is integrated with a fixed-order rule; a panel is accepted when
the whole-panel estimate agrees with the sum over its two halves to within
the panel's share of the tolerance, otherwise both halves are refined.
Nothing here knows about kernels, so it can check their closed forms.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

ORDER = 15
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(ORDER)


class QuadratureError(ArithmeticError):
    """Subdivision limit reached before the requested tolerance."""


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    max_depth: int = 40

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


def _rule(f, a: float, b: float) -> float:
    half, mid = 0.5 * (b - a), 0.5 * (b + a)
    x = mid + half * _NODES
    values = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return half * float(_WEIGHTS @ values)


def _adaptive(f, a: float, b: float, tol: float, max_depth: int) -> float:
    total = 0.0
    stack = [(a, b, _rule(f, a, b), tol, 0)]
    while stack:
        lo, hi, whole, panel_tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = _rule(f, lo, mid), _rule(f, mid, hi)
        if abs(whole - (left + right)) <= panel_tol:
            total += left + right
            continue
        if depth + 1 >= max_depth:
            raise QuadratureError(
                f"no convergence on [{lo}, {hi}] after {max_depth} subdivisions"
            )
        stack.append((lo, mid, left, 0.5 * panel_tol, depth + 1))
        stack.append((mid, hi, right, 0.5 * panel_tol, depth + 1))
    return total


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    breakpoints: Sequence[float] = (),
) -> float:
    """Integral of a vectorised ``f`` over [a, b].

    ``breakpoints`` inside (a, b) start the subdivision there, which is how
    kinks such as |x - y| are handled without relying on adaptivity.
    """
    if a > b:
        raise ValueError("need a <= b")
    if a == b:
        return 0.0
    edges = [a, *sorted(p for p in breakpoints if a < p < b), b]
    width = b - a
    return sum(
        _adaptive(f, lo, hi, cfg.abs_tol * (hi - lo) / width, cfg.max_depth)
        for lo, hi in zip(edges[:-1], edges[1:])
    )


def integrate2d(
    f: Callable[[float, np.ndarray], np.ndarray],
    cfg: QuadratureConfig = QuadratureConfig(),
    split_diagonal: bool = False,
) -> float:
    """Integral of ``f(x, y)`` over the unit square by nested ``integrate``.

    ``f`` is called with a scalar ``x`` and an array of ``y``.  Half of the
    tolerance goes to each axis.  ``split_diagonal`` breaks the inner
    integral at y = x for kernels with a kink on the diagonal.
    """
    half = QuadratureConfig(0.5 * cfg.abs_tol, cfg.max_depth)

    def inner(xs):
        return np.array([
            integrate(lambda y: f(x, y), 0.0, 1.0, half, (x,) if split_diagonal else ())
            for x in np.atleast_1d(xs)
        ])

    return integrate(inner, 0.0, 1.0, half)

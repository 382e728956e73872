"""Exact generation and counting of Farey sequences.

The sequence F_n is produced by the classical next-term recurrence: for
consecutive terms a/b < c/d the following term is (k*c - a)/(k*d - b) with
k = (n + b) // d.  All integer state stays below 2*n + 1, so int64 storage is
exact far beyond ``MAX_N``; the bound is there to keep the O(n^2) memory of a
materialised sequence (|F_n| ~ 3 n^2 / pi^2, about 3e7 points at n = 10^4)
and the downstream int64 statistics within a predictable envelope.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

MAX_N = 10_000


class FareyRangeError(OverflowError):
    """Raised when n exceeds the documented overflow-safe bound ``MAX_N``."""


@functools.total_ordering
@dataclass(frozen=True)
class Rational:
    """A reduced fraction ``num/den`` with ``den > 0``."""

    num: int
    den: int

    def __post_init__(self):
        num, den = int(self.num), int(self.den)
        if den <= 0:
            raise ValueError(f"denominator must be positive, got {den}")
        g = math.gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    @classmethod
    def parse(cls, text: str) -> "Rational":
        num, _, den = text.strip().partition("/")
        return cls(int(num), int(den) if den else 1)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> "Rational":
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.num / self.den

    def __lt__(self, other: "Rational") -> bool:
        if not isinstance(other, Rational):
            return NotImplemented
        return self.num * other.den < other.num * self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


@dataclass(frozen=True, eq=False)
class FareySequence:
    """The n-th Farey sequence stored as parallel numerator/denominator arrays."""

    n: int
    num: np.ndarray
    den: np.ndarray

    def __len__(self) -> int:
        return len(self.num)

    @property
    def N(self) -> int:
        return len(self.num)

    @property
    def points(self) -> list[Rational]:
        return [Rational(int(p), int(q)) for p, q in zip(self.num, self.den)]

    def fractions(self) -> list[Fraction]:
        return [Fraction(int(p), int(q)) for p, q in zip(self.num, self.den)]

    def values(self, dtype=np.float64) -> np.ndarray:
        """Points as floating values, each correctly rounded once from p/q."""
        return self.num.astype(dtype) / self.den.astype(dtype)

    def restrict(self, n: int) -> "FareySequence":
        """F_n as the subsequence of this F_m (n <= m) with denominators <= n."""
        if not 1 <= n <= self.n:
            raise ValueError(f"cannot restrict F_{self.n} to F_{n}")
        keep = self.den <= n
        return FareySequence(n, self.num[keep], self.den[keep])

    def __eq__(self, other) -> bool:
        if not isinstance(other, FareySequence):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.num, other.num)
            and np.array_equal(self.den, other.den)
        )

    def __str__(self) -> str:
        return ",".join(f"{p}/{q}" for p, q in zip(self.num, self.den))


def _check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise TypeError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > MAX_N:
        raise FareyRangeError(f"n = {n} exceeds the supported bound {MAX_N}")
    return n


def totient_sieve(n: int) -> np.ndarray:
    """Euler's phi(1), ..., phi(n) by an Eratosthenes-style sieve."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if phi[p] == p:  # untouched so far, hence prime
            phi[p::p] -= phi[p::p] // p
    return phi[1:]


def farey_size(n: int) -> int:
    """|F_n| = 1 + sum_{k<=n} phi(k), without building the sequence."""
    n = _check_n(n)
    return 1 + int(totient_sieve(n).sum())


def farey_sequence(n: int) -> FareySequence:
    n = _check_n(n)
    size = farey_size(n)
    num = np.empty(size, dtype=np.int64)
    den = np.empty(size, dtype=np.int64)
    a, b, c, d = 0, 1, 1, n
    num[0], den[0] = a, b
    i = 1
    while c <= n:
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        num[i], den[i] = a, b
        i += 1
    assert i == size
    return FareySequence(n, num, den)


def _num_den(seq: FareySequence | Iterable) -> tuple[Sequence[int], Sequence[int]]:
    if isinstance(seq, FareySequence):
        return seq.num, seq.den
    pts = [p if isinstance(p, Rational) else Rational.from_fraction(p) for p in seq]
    return [p.num for p in pts], [p.den for p in pts]


def check_neighbors(seq: FareySequence | Iterable) -> bool:
    """True iff every consecutive pair a/b, c/d satisfies b*c - a*d == 1."""
    if isinstance(seq, FareySequence):
        # entries are bounded by MAX_N, so the int64 products are exact
        det = seq.den[:-1] * seq.num[1:] - seq.num[:-1] * seq.den[1:]
        return bool(np.all(det == 1))
    num, den = _num_den(seq)
    return all(
        int(b) * int(c) - int(a) * int(d) == 1
        for a, b, c, d in zip(num[:-1], den[:-1], num[1:], den[1:])
    )

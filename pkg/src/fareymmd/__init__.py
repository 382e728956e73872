"""Farey sequences, their maximum mean discrepancies and rate diagnostics."""
from .analysis import CurvePoint, RateFit, mertens_ratio, normalized_curve, rate_fit
from .farey import FareySequence, Rational, check_neighbors, farey_sequence, farey_size, totient_sieve
from .kernels import Kernel, KernelSpec, make_kernel
from .mmd import (
    DiscrepancyStats,
    MmdResult,
    franel_sum,
    l2_discretized,
    mikolas_error_x2,
    mmd_squared,
    mmd_lemma1,
    mmd_squared_fast,
    mmd_squared_naive,
)

__all__ = [
    "CurvePoint", "DiscrepancyStats", "FareySequence", "Kernel", "KernelSpec", "MmdResult",
    "RateFit", "Rational", "check_neighbors", "farey_sequence", "farey_size", "franel_sum",
    "l2_discretized", "make_kernel", "mertens_ratio", "mikolas_error_x2", "mmd_lemma1", "mmd_squared",
    "mmd_squared_fast", "mmd_squared_naive", "normalized_curve", "rate_fit", "totient_sieve",
]

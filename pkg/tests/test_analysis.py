import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fareymmd.analysis import (
    CurvePoint,
    default_window,
    farey_mmds,
    mertens_ratio,
    normalized_curve,
    planted_curve,
    rate_fit,
)
from fareymmd.farey import farey_sequence, totient_sieve
from fareymmd.mmd import mmd_squared_naive


@given(st.floats(-4, 0.5), st.floats(1e-6, 1e3))
@settings(max_examples=40, deadline=None)
def test_planted_exponent_recovered(exponent, scale):
    fit = rate_fit(planted_curve(exponent, 120, scale), 20, 120)
    assert fit.slope == pytest.approx(exponent, abs=1e-11)
    assert fit.intercept == pytest.approx(math.log(scale), abs=1e-9)
    assert fit.residual_l2 < 1e-10


def test_fit_with_noise_has_residual():
    rng = np.random.default_rng(0)
    curve = [CurvePoint(p.n, p.N, p.value * math.exp(0.1 * rng.standard_normal()), 0)
             for p in planted_curve(-1.5, 200)]
    fit = rate_fit(curve, 50, 200)
    assert abs(fit.slope + 1.5) < 0.2
    assert fit.residual_l2 > 0.1


def test_default_window():
    assert default_window(100) == (50, 100)
    assert default_window(250) == (50, 250)
    assert default_window(1000) == (200, 1000)
    fit = rate_fit(planted_curve(-1, 1000))
    assert fit.n_range == (200, 1000)


@pytest.mark.parametrize("lo, hi", [(50, 50), (60, 50), (98, 99)])
def test_fit_window_errors(lo, hi):
    with pytest.raises(ValueError):
        rate_fit(planted_curve(-1, 100), lo, hi)


def test_fit_rejects_nonpositive():
    curve = planted_curve(-1, 20)
    curve[10] = CurvePoint(curve[10].n, curve[10].N, 0.0, 0.0)
    with pytest.raises(ValueError):
        rate_fit(curve, 2, 20)


def test_mertens_values():
    assert mertens_ratio(250) == pytest.approx(19025 * math.pi**2 / 187500, rel=1e-15)
    assert abs(mertens_ratio(250) - 1) < 0.002


def test_mertens_deviation_shrinks_on_dyadic_blocks():
    phi = totient_sieve(6400)
    n = np.arange(1, 6401)
    dev = np.abs((1 + np.cumsum(phi)) * math.pi**2 / (3 * n * n) - 1)
    blocks = [dev[k - 1:2 * k - 1].max() for k in (100, 200, 400, 800, 1600, 3200)]
    assert all(a > b for a, b in zip(blocks, blocks[1:]))
    # the classical error term is O(log n / n)
    assert np.all(dev[99:] <= 0.5 * np.log(n[99:]) / n[99:])
    assert dev[249] == pytest.approx(abs(mertens_ratio(250) - 1), rel=1e-12)


def test_farey_mmds_match_direct_computation():
    results = farey_mmds("matern32", 30, n_min=25, method="naive")
    assert [r.n for r in results] == list(range(25, 31))
    for r in results:
        assert r.mmd_squared == mmd_squared_naive("matern32", farey_sequence(r.n)).mmd_squared


def test_threads_do_not_change_results():
    one = farey_mmds("matern52", 60, threads=1)
    four = farey_mmds("matern52", 60, threads=4)
    assert [r.mmd_squared for r in one] == [r.mmd_squared for r in four]


def test_normalized_curve():
    curve = normalized_curve("brownian", 40, n_min=10)
    assert [p.n for p in curve] == list(range(10, 41))
    for p in curve:
        assert p.normalized == pytest.approx(p.value * p.n**1.5)
    with pytest.raises(ValueError):
        normalized_curve("brownian", 1)


def test_farey_mmds_bounds():
    with pytest.raises(ValueError):
        farey_mmds("brownian", 5, n_min=6)
    with pytest.raises(ValueError):
        farey_mmds("brownian", 5, n_min=0)


def test_brownian_curve_hand_values():
    p2, p3 = normalized_curve("brownian", 3)
    assert p2.value == pytest.approx(1 / 6, rel=1e-15)
    assert p2.normalized == pytest.approx(2**1.5 / 6, rel=1e-15)
    assert p3.value == pytest.approx((7 / 900) ** 0.5, rel=1e-15)
    assert p3.normalized == pytest.approx(0.458258, abs=1e-6)


def test_brownian_normalized_band():
    values = [p.normalized for p in normalized_curve("brownian", 250, n_min=10)]
    assert 0.1 <= min(values) and max(values) <= 2.0


def test_mertens_small_n():
    assert mertens_ratio(1) == pytest.approx(2 * math.pi**2 / 3, rel=1e-15)
    assert all(mertens_ratio(n) > 0 for n in range(1, 50))

import math

import numpy as np
import pytest

from fareymmd.quadrature import QuadratureConfig, QuadratureError, integrate, integrate2d


def test_polynomial_exact():
    assert integrate(lambda x: x**28, 0, 1) == pytest.approx(1 / 29, abs=1e-15)


def test_smooth_functions():
    assert integrate(np.sin, 0, math.pi) == pytest.approx(2, abs=1e-13)
    assert integrate(np.exp, -1, 2) == pytest.approx(math.exp(2) - math.exp(-1), abs=1e-12)


def test_kink_with_and_without_breakpoint():
    f = lambda x: np.abs(x - 0.3)
    exact = (0.3**2 + 0.7**2) / 2
    assert integrate(f, 0, 1, breakpoints=(0.3,)) == pytest.approx(exact, abs=1e-15)
    assert integrate(f, 0, 1) == pytest.approx(exact, abs=1e-12)


def test_sqrt_singularity_converges():
    assert integrate(np.sqrt, 0, 1, QuadratureConfig(1e-10)) == pytest.approx(2 / 3, abs=1e-10)


def test_depth_limit_raises():
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.sin(1 / np.maximum(x, 1e-300)), 0, 1, QuadratureConfig(1e-14, 6))


def test_degenerate_and_reversed():
    assert integrate(np.exp, 0.5, 0.5) == 0.0
    with pytest.raises(ValueError):
        integrate(np.exp, 1, 0)


@pytest.mark.parametrize("kw", [dict(abs_tol=0), dict(abs_tol=-1), dict(max_depth=0)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        QuadratureConfig(**kw)


def test_2d_min_kernel():
    # int int min(x, y) = 1/3
    value = integrate2d(lambda x, y: np.minimum(x, y), split_diagonal=True)
    assert value == pytest.approx(1 / 3, abs=1e-14)


def test_2d_separable():
    value = integrate2d(lambda x, y: np.exp(x) * y**2)
    assert value == pytest.approx((math.e - 1) / 3, abs=1e-13)

"""Tests for src.problems.sbo: smoothing, analytic partials and the fixed point."""

import numpy as np
import pytest

from src.problems.sbo import (
    HESSIAN_FLOOR, grad_x_F, hess_xx_F, htilde2, hypergradient, lambda_map, lower_root, make_sbo, upper_root,
)


@pytest.mark.parametrize("z, value, slope", [
    (0.0, 0.0, 0.0),
    (0.5, 0.125, 0.5),
    (-0.5, -0.125, 0.5),
    (1.0, 0.5, 1.0),
    (2.0, 1.5, 1.0),
    (-3.0, -2.5, 1.0),
])
def test_htilde2_values(z, value, slope):
    h, dh = htilde2(z)
    assert isinstance(h, float)
    assert h == pytest.approx(value)
    assert dh == pytest.approx(slope)


@pytest.mark.parametrize("z", [-1.0, 1.0])
def test_htilde2_is_c1_at_breakpoints(z):
    eps = 1e-9
    left, d_left = htilde2(z - eps)
    right, d_right = htilde2(z + eps)
    assert right - left == pytest.approx(2 * eps, rel=1e-5)
    assert d_left == pytest.approx(d_right, abs=1e-8)


def test_htilde2_vectorised():
    h, dh = htilde2(np.array([-2.0, 0.0, 0.5]))
    np.testing.assert_allclose(h, [-1.5, 0.0, 0.125])
    np.testing.assert_allclose(dh, [1.0, 0.0, 0.5])


def test_lower_level_manifold():
    y = np.linspace(-3, 3, 61)
    np.testing.assert_allclose(grad_x_F(lambda_map(y), y), 0.0, atol=1e-10)
    assert 20 * lower_root() + 10 * np.cos(lower_root()) == pytest.approx(0.0, abs=1e-12)


def test_hypergradient_independent_of_x():
    y = np.linspace(-3, 3, 13)
    for x in (-2.0, 0.0, 1.7):
        np.testing.assert_allclose(hypergradient(np.full_like(y, x), y), np.cos(y) + 2 * y, atol=1e-10)


def test_hessian_stays_above_floor():
    x, y = np.meshgrid(np.linspace(-5, 5, 101), np.linspace(-5, 5, 101))
    assert hess_xx_F(x, y).min() >= HESSIAN_FLOOR - 1e-12


def test_fixed_point(sbo):
    x_star, y_star = sbo.fixed_point
    assert y_star[0] == pytest.approx(upper_root())
    assert abs(sbo.g(x_star, y_star)[0]) < 1e-12
    assert abs(sbo.f(x_star, y_star)[0]) < 1e-10
    assert np.cos(y_star[0]) + 2 * y_star[0] == pytest.approx(0.0, abs=1e-12)


def test_problem_shape(sbo):
    assert (sbo.d1, sbo.d2) == (1, 1)
    assert sbo.slow_noise is True
    assert sbo.consts.c == pytest.approx(3.6)
    assert [check.name for check in sbo.derivative_checks] == [
        "grad_x_F", "grad_y_G", "grad_x_G", "hess_xx_F", "hess_yx_F",
    ]


def test_factory_is_deterministic():
    a, b = make_sbo(), make_sbo()
    np.testing.assert_array_equal(a.x_star, b.x_star)
    np.testing.assert_array_equal(a.y_star, b.y_star)

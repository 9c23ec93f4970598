"""Tests for src.core.iteration: IterateState, step() and residuals()."""

import numpy as np
import pytest

from src.core.iteration import DIVERGENCE_THRESHOLD, IterateState, is_bounded, residuals, step
from src.core.schedule import StepSchedule
from src.utils.errors import ConfigurationError, DivergenceError


class _Linear:
    """f = x - y, g = y; lambda(y) = y, y* = 0."""
    d1 = 2
    d2 = 2
    y_star = np.zeros(2)

    def f(self, x, y):
        return x - y

    def g(self, x, y):
        return y

    def lambda_map(self, y):
        return np.asarray(y)


@pytest.fixture
def linear():
    return _Linear()


@pytest.fixture
def sched():
    return StepSchedule.constant(0.5, 0.25)


# ── step ──────────────────────────────────────────────────────────────

class TestStep:
    def test_noise_free_update(self, linear, sched):
        state = IterateState(k=0, x=[2.0, 2.0], y=[1.0, 1.0])
        nxt = step(state, linear, (np.zeros(2), np.zeros(2)), sched)
        assert nxt.k == 1
        np.testing.assert_allclose(nxt.x, [1.5, 1.5])
        np.testing.assert_allclose(nxt.y, [0.75, 0.75])

    def test_noise_enters_with_step_size(self, linear, sched):
        state = IterateState(k=0, x=[1.0, 1.0], y=[1.0, 1.0])
        nxt = step(state, linear, (np.array([2.0, 0.0]), np.array([0.0, 4.0])), sched)
        np.testing.assert_allclose(nxt.x, [0.0, 1.0])
        np.testing.assert_allclose(nxt.y, [0.75, -0.25])

    def test_state_is_not_mutated(self, linear, sched):
        state = IterateState(k=3, x=[2.0, 2.0], y=[1.0, 1.0])
        step(state, linear, (np.zeros(2), np.zeros(2)), sched)
        np.testing.assert_array_equal(state.x, [2.0, 2.0])
        with pytest.raises(ValueError):
            state.x[0] = 0.0

    def test_divergence_raises_with_iteration(self, linear, sched):
        state = IterateState(k=4, x=[1.0, 1.0], y=[1.0, 1.0])
        with pytest.raises(DivergenceError) as info:
            step(state, linear, (np.array([1e14, 0.0]), np.zeros(2)), sched)
        assert info.value.iteration == 5

    def test_nan_noise_diverges(self, linear, sched):
        state = IterateState(k=0, x=[1.0, 1.0], y=[1.0, 1.0])
        with pytest.raises(DivergenceError):
            step(state, linear, (np.array([np.nan, 0.0]), np.zeros(2)), sched)

    def test_dimension_mismatch(self, linear, sched):
        state = IterateState(k=0, x=[1.0, 1.0, 1.0], y=[1.0, 1.0])
        with pytest.raises(ConfigurationError):
            step(state, linear, (np.zeros(2), np.zeros(2)), sched)


# ── residuals ─────────────────────────────────────────────────────────

class TestResiduals:
    def test_residuals_and_norms(self, linear):
        res = residuals(IterateState(k=0, x=[3.0, 1.0], y=[1.0, 2.0]), linear)
        np.testing.assert_allclose(res.x_hat, [2.0, -1.0])
        np.testing.assert_allclose(res.y_hat, [1.0, 2.0])
        assert res.x_hat_sq == pytest.approx(5.0)
        assert res.y_hat_sq == pytest.approx(5.0)

    def test_zero_at_fixed_point(self, sgd_pr):
        res = residuals(IterateState(k=0, x=sgd_pr.x_star, y=sgd_pr.y_star), sgd_pr)
        assert res.x_hat_sq == 0.0
        assert res.y_hat_sq == 0.0

    def test_problem_without_lambda_map(self):
        class Bare:
            d1 = d2 = 1

            def f(self, x, y):
                return x

            def g(self, x, y):
                return y

        with pytest.raises(ConfigurationError):
            residuals(IterateState(k=0, x=[1.0], y=[1.0]), Bare())


class TestIsBounded:
    def test_threshold_is_inclusive(self):
        assert is_bounded(np.array([DIVERGENCE_THRESHOLD]), np.zeros(1))
        assert not is_bounded(np.array([DIVERGENCE_THRESHOLD * 2]), np.zeros(1))

    def test_infinite(self):
        assert not is_bounded(np.array([np.inf]), np.zeros(1))


def test_initial_state(sgd_pr):
    state = IterateState.initial(sgd_pr)
    assert state.k == 0
    np.testing.assert_array_equal(state.x, np.ones(5))
    np.testing.assert_array_equal(state.y, np.ones(5))

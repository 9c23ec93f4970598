"""Tests for src.core.lyapunov."""

import numpy as np
import pytest

from src.core.iteration import IterateState, residuals
from src.core.lyapunov import coupling_constant, lyapunov, lyapunov_from_norms
from src.core.schedule import StepSchedule
from src.planner.constants import AssumptionConstants


def test_coupling_constant_sgd_pr(sgd_pr):
    assert coupling_constant(sgd_pr.consts) == pytest.approx(16.0)


def test_coupling_constant_sbo(sbo):
    assert coupling_constant(sbo.consts) == pytest.approx(3.6)


def test_lyapunov_weights_fast_residual(sgd_pr):
    sched = StepSchedule(alpha=2.0, beta=1.0, a=1.0, b=1.0)
    state = IterateState(k=0, x=sgd_pr.x_star + 1.0, y=sgd_pr.y_star + 2.0)
    value = lyapunov(residuals(state, sgd_pr), sched, 0, sgd_pr.consts)
    # c * (1/2) * 5 + 4 * 5
    assert value.v == pytest.approx(16.0 * 0.5 * 5.0 + 20.0)
    assert value.c == pytest.approx(16.0)


def test_lyapunov_zero_at_fixed_point(sgd_pr):
    sched = StepSchedule.constant(1.0, 0.1)
    state = IterateState(k=0, x=sgd_pr.x_star, y=sgd_pr.y_star)
    assert lyapunov(residuals(state, sgd_pr), sched, 0, sgd_pr.consts).v == 0.0


def test_lyapunov_from_norms_vectorises():
    consts = AssumptionConstants(L_lambda=0.0, L_f=3.0, mu_f=1.0, L_g=2.0, mu_g=1.0)
    v = lyapunov_from_norms(np.array([1.0, 2.0]), np.array([0.5, 0.0]), 0.25, coupling_constant(consts))
    np.testing.assert_allclose(v, [4.5, 8.0])

"""Tests for src.analysis.lemma_check: the one-step Lyapunov recursion."""

import numpy as np
import pytest

from src.analysis.lemma_check import check_lemma3_bound
from src.core.iteration import IterateState
from src.core.schedule import StepSchedule
from src.noise.rng import RngStream
from src.noise.spec import NoiseSpec
from src.utils.errors import PreconditionError

SCHED = StepSchedule(alpha=0.1, beta=0.001, a=2.0 / 3.0, b=1.0, k0=0.0)


def _states(problem, k, count=8, seed=0):
    rng = np.random.default_rng(seed)
    states = [IterateState(k=k, x=np.ones(problem.d1), y=np.ones(problem.d2))]
    for _ in range(count - 1):
        states.append(IterateState(k=k, x=rng.uniform(-3, 3, problem.d1), y=rng.uniform(-3, 3, problem.d2)))
    return states


def test_noise_free_bound_holds(sgd_pr):
    report = check_lemma3_bound(sgd_pr, NoiseSpec.none(), SCHED, 10, _states(sgd_pr, 10), 100, RngStream(0, 0))
    assert report.mc_samples == 1
    assert len(report.states) == 8
    assert report.min_margin >= -1e-12
    assert all(s.stderr_next == 0.0 for s in report.states)


def test_fixed_point_stays_put(sgd_pr):
    state = IterateState(k=10, x=sgd_pr.x_star, y=sgd_pr.y_star)
    report = check_lemma3_bound(sgd_pr, NoiseSpec.none(), SCHED, 10, [state], 1, RngStream(0, 0))
    bound = report.states[0]
    assert bound.v_k == 0.0
    assert bound.mean_next == pytest.approx(0.0, abs=1e-24)
    assert bound.margin >= -1e-12


def test_state_noise_bound_holds_in_expectation(sgd_pr):
    noise = NoiseSpec.state(0.0, 0.02)
    report = check_lemma3_bound(sgd_pr, noise, SCHED, 10, _states(sgd_pr, 10, count=4), 2000, RngStream(1, 0))
    assert report.mc_samples == 2000
    assert report.min_margin >= -3.0
    assert all(s.stderr_next > 0 for s in report.states)


def test_time_noise_bound_on_sbo(sbo):
    sched = StepSchedule(alpha=1.0, beta=1e-4, a=0.75, b=1.0, k0=0.0)
    noise = NoiseSpec.time(0.0, 0.0, 0.02, 0.02)
    states = _states(sbo, 50, count=4, seed=3)
    report = check_lemma3_bound(sbo, noise, sched, 50, states, 2000, RngStream(2, 0))
    assert report.min_margin >= -3.0


def test_precondition_enforced(sgd_pr):
    sched = StepSchedule(alpha=0.1, beta=0.01, a=2.0 / 3.0, b=1.0, k0=0.0)
    with pytest.raises(PreconditionError, match="below the one-step bound threshold"):
        check_lemma3_bound(sgd_pr, NoiseSpec.none(), sched, 0, _states(sgd_pr, 0), 1, RngStream(0, 0))


def test_report_serialises(sgd_pr):
    report = check_lemma3_bound(sgd_pr, NoiseSpec.none(), SCHED, 10, _states(sgd_pr, 10, count=2), 1, RngStream(0, 0))
    data = report.to_dict()
    assert data["k"] == 10
    assert len(data["states"]) == 2

"""Tests for src.harness.ensemble: chunked runs and deterministic reduction."""

import math

import numpy as np
import pytest

from src.core.schedule import StepSchedule
from src.harness.engine import run_trajectory
from src.harness.ensemble import (
    CHUNK_SIZE, THREADS_ENV, EnsembleSummary, reduce_checkpoint, resolve_threads, run_ensemble, tree_sum,
)
from src.noise.spec import NoiseSpec
from src.utils.errors import ConfigurationError, EnsembleError


def test_single_replicate(make_config):
    summary = run_ensemble(make_config(replicates=1), threads=1)
    assert all(cp.n_alive == 1 for cp in summary.checkpoints)
    assert all(cp.stderr_V == 0.0 for cp in summary.checkpoints)
    assert summary.diverged == 0


def test_thread_count_does_not_change_results(make_config):
    config = make_config(replicates=2 * CHUNK_SIZE + 5, iterations=100)
    one = run_ensemble(config, threads=1)
    many = run_ensemble(config, threads=8)
    np.testing.assert_array_equal(one.mean_v, many.mean_v)
    assert [cp.stderr_V for cp in one.checkpoints] == [cp.stderr_V for cp in many.checkpoints]


def test_mean_matches_individual_trajectories(make_config, sgd_pr):
    config = make_config(replicates=6, iterations=50)
    summary = run_ensemble(config, threads=2)
    stacked = np.stack([run_trajectory(config, r, sgd_pr).v for r in range(6)])
    np.testing.assert_allclose(summary.mean_v, stacked.mean(axis=0), rtol=1e-12)
    assert list(summary.ks) == list(config.checkpoints)


def test_all_diverged_raises(make_config):
    config = make_config(
        noise=NoiseSpec.none(), schedule=StepSchedule.constant(alpha=10.0, beta=10.0), iterations=50,
    )
    with pytest.raises(EnsembleError, match="all 4 replicates diverged"):
        run_ensemble(config, threads=1)


def test_tree_sum():
    assert tree_sum(np.array([])) == 0.0
    assert tree_sum(np.array([2.5])) == 2.5
    assert tree_sum(np.arange(1.0, 6.0)) == 15.0
    values = np.random.default_rng(3).normal(size=1001)
    assert tree_sum(values) == pytest.approx(math.fsum(values), abs=1e-12)


def test_reduce_checkpoint_skips_diverged():
    mean, stderr, n = reduce_checkpoint(np.array([1.0, np.nan, 3.0]))
    assert (mean, n) == (2.0, 2)
    assert stderr == pytest.approx(1.0)


def test_reduce_checkpoint_all_nan():
    mean, stderr, n = reduce_checkpoint(np.array([np.nan, np.nan]))
    assert n == 0
    assert math.isnan(mean) and math.isnan(stderr)


def test_resolve_threads(monkeypatch):
    assert resolve_threads(3) == 3
    monkeypatch.setenv(THREADS_ENV, "5")
    assert resolve_threads() == 5
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigurationError):
        resolve_threads()
    with pytest.raises(ConfigurationError):
        resolve_threads(0)


def test_from_series():
    summary = EnsembleSummary.from_series([1, 10], [1.0, 0.1])
    np.testing.assert_array_equal(summary.ks, [1, 10])
    np.testing.assert_array_equal(summary.mean_v, [1.0, 0.1])
    assert summary.diverged == 0

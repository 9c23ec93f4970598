"""Tests for src.noise.rng: per-replicate streams."""

import numpy as np
import pytest

from src.noise.rng import MAX_SEED, RngStream
from src.utils.errors import ConfigurationError


def test_same_key_same_draws():
    a, b = RngStream(42, 3), RngStream(42, 3)
    np.testing.assert_array_equal(a.standard_xi(100), b.standard_xi(100))
    np.testing.assert_array_equal(a.standard_psi(100), b.standard_psi(100))


def test_xi_and_psi_are_distinct_streams():
    s = RngStream(42, 0)
    assert not np.array_equal(s.standard_xi(50), s.standard_psi(50))


def test_replicates_differ():
    assert not np.array_equal(RngStream(42, 0).standard_xi(50), RngStream(42, 1).standard_xi(50))


def test_master_seed_changes_streams():
    assert not np.array_equal(RngStream(1, 0).standard_xi(50), RngStream(2, 0).standard_xi(50))


def test_psi_draws_do_not_shift_xi():
    a, b = RngStream(9, 2), RngStream(9, 2)
    b.standard_psi(1000)
    np.testing.assert_array_equal(a.standard_xi(10), b.standard_xi(10))


def test_block_draws_equal_sequential_draws():
    a, b = RngStream(5, 0), RngStream(5, 0)
    block = a.standard_xi((4, 3))
    rows = np.stack([b.standard_xi(3) for _ in range(4)])
    np.testing.assert_array_equal(block, rows)


def test_largest_seed_accepted():
    RngStream(MAX_SEED, 0)


@pytest.mark.parametrize("seed, rid", [(-1, 0), (MAX_SEED + 1, 0), (0, -1)])
def test_invalid_keys(seed, rid):
    with pytest.raises(ConfigurationError):
        RngStream(seed, rid)


def test_no_collisions_across_replicates_and_substreams():
    n_replicates, n_draws = 100, 10_000
    draws = []
    for rid in range(n_replicates):
        stream = RngStream(20240501, rid)
        draws.append(stream.standard_xi(n_draws))
        draws.append(stream.standard_psi(n_draws))
    pooled = np.concatenate(draws)
    assert pooled.size == 2 * n_replicates * n_draws
    assert np.unique(pooled).size == pooled.size


def test_substreams_are_not_shifted_copies():
    stream = RngStream(3, 0)
    xi, psi = stream.standard_xi(10_000), stream.standard_psi(10_000)
    assert np.intersect1d(xi, psi).size == 0

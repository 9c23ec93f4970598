"""
SGD with Polyak-Ruppert averaging.

    F(x) = sum_i x_i^2 + sin x_i,   f(x, y) = 2x + cos x
    g(x, y) = y - x                 (slow iterate averages the fast one)

The averaging step carries no noise of its own, so psi is identically zero.
"""
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from src.planner.constants import AssumptionConstants
from src.problems.spec import DerivativeCheck, ProblemSpec
from src.utils.errors import ConfigurationError

ROOT_XTOL = 1e-14

SGD_PR_CONSTANTS = AssumptionConstants(L_lambda=0.0, L_f=3.0, mu_f=1.0, L_g=2.0, mu_g=1.0)


@lru_cache(maxsize=None)
def coordinate_root() -> float:
    """Root of 2x + cos x, bracketed in [-1, 0]."""
    return brentq(lambda x: 2.0 * x + np.cos(x), -1.0, 0.0, xtol=ROOT_XTOL)


def _f(x, y):
    x = np.asarray(x, dtype=np.float64)
    return 2.0 * x + np.cos(x)


def _g(x, y):
    return np.asarray(y, dtype=np.float64) - np.asarray(x, dtype=np.float64)


def _potential_F(x, y):
    x = np.asarray(x, dtype=np.float64)
    return float(np.sum(x ** 2 + np.sin(x)))


def _potential_G(x, y):
    diff = np.asarray(y, dtype=np.float64) - np.asarray(x, dtype=np.float64)
    return 0.5 * float(np.dot(diff, diff))


def make_sgd_pr(dim: int = 5) -> ProblemSpec:
    if int(dim) < 1:
        raise ConfigurationError(f"SGD-PR dimension must be at least 1, got {dim}")
    dim = int(dim)
    root = coordinate_root()

    def lambda_map(y):
        y = np.asarray(y, dtype=np.float64)
        return np.full(y.shape[:-1] + (dim,), root)

    return ProblemSpec(
        name="sgd-pr",
        d1=dim,
        d2=dim,
        f=_f,
        g=_g,
        lambda_map=lambda_map,
        x_star=np.full(dim, root),
        y_star=np.full(dim, root),
        consts=SGD_PR_CONSTANTS,
        slow_noise=False,
        verify_box=5.0,
        derivative_checks=(
            DerivativeCheck("grad_x_F", _potential_F, _f, wrt="x"),
            DerivativeCheck("grad_y_G", _potential_G, _g, wrt="y"),
        ),
    )

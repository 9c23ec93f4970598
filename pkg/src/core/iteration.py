"""
The coupled fast/slow update and the residual variables.

    x' = x - alpha_k (f(x, y) + xi)
    y' = y - beta_k  (g(x, y) + psi)
"""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from src.core.interfaces import IOperatorPair, IProblem
from src.core.schedule import StepSchedule, step_sizes
from src.utils.errors import ConfigurationError, DivergenceError

DIVERGENCE_THRESHOLD = 1e12


@dataclass(frozen=True, eq=False)
class IterateState:
    """Value object holding (k, x_k, y_k)."""
    k: int
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.array(self.x, dtype=np.float64).reshape(-1))
        object.__setattr__(self, "y", np.array(self.y, dtype=np.float64).reshape(-1))
        if self.k < 0:
            raise ConfigurationError(f"iteration index must be nonnegative, got {self.k}")
        self.x.setflags(write=False)
        self.y.setflags(write=False)

    @classmethod
    def initial(cls, problem: IOperatorPair, x0: float = 1.0, y0: float = 1.0) -> "IterateState":
        """State at k = 0 with every coordinate of x set to x0 and of y to y0."""
        return cls(k=0, x=np.full(problem.d1, float(x0)), y=np.full(problem.d2, float(y0)))

    def check_dims(self, problem: IOperatorPair) -> None:
        if self.x.shape != (problem.d1,) or self.y.shape != (problem.d2,):
            raise ConfigurationError(
                f"state dims ({self.x.size}, {self.y.size}) do not match problem ({problem.d1}, {problem.d2})"
            )


@dataclass(frozen=True, eq=False)
class Residuals:
    """x_hat = x - lambda(y), y_hat = y - y*."""
    x_hat: np.ndarray
    y_hat: np.ndarray
    x_hat_sq: float = field(init=False)
    y_hat_sq: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "x_hat", np.asarray(self.x_hat, dtype=np.float64))
        object.__setattr__(self, "y_hat", np.asarray(self.y_hat, dtype=np.float64))
        object.__setattr__(self, "x_hat_sq", float(np.dot(self.x_hat, self.x_hat)))
        object.__setattr__(self, "y_hat_sq", float(np.dot(self.y_hat, self.y_hat)))


def step(
    state: IterateState,
    problem: IOperatorPair,
    noise: Tuple[np.ndarray, np.ndarray],
    sched: StepSchedule,
) -> IterateState:
    """Advance one iteration; raise DivergenceError if the result leaves the guarded region."""
    xi, psi = (np.asarray(v, dtype=np.float64) for v in noise)
    if xi.shape != (problem.d1,) or psi.shape != (problem.d2,):
        raise ConfigurationError(
            f"noise dims ({xi.size}, {psi.size}) do not match problem ({problem.d1}, {problem.d2})"
        )
    alpha_k, beta_k = step_sizes(state.k, sched)
    with np.errstate(over="ignore", invalid="ignore"):
        x_next = state.x - alpha_k * (problem.f(state.x, state.y) + xi)
        y_next = state.y - beta_k * (problem.g(state.x, state.y) + psi)
    if not is_bounded(x_next, y_next):
        raise DivergenceError(state.k + 1)
    return IterateState(k=state.k + 1, x=x_next, y=y_next)


def is_bounded(x: np.ndarray, y: np.ndarray) -> bool:
    """True when both iterates are finite with norms at most DIVERGENCE_THRESHOLD."""
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        return False
    return bool(np.linalg.norm(x) <= DIVERGENCE_THRESHOLD and np.linalg.norm(y) <= DIVERGENCE_THRESHOLD)


def residuals(state: IterateState, problem: IProblem) -> Residuals:
    lambda_map = getattr(problem, "lambda_map", None)
    y_star = getattr(problem, "y_star", None)
    if lambda_map is None or y_star is None:
        raise ConfigurationError("problem supplies no analytic lambda map or cached y*")
    return Residuals(x_hat=state.x - lambda_map(state.y), y_hat=state.y - y_star)

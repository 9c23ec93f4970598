"""
Step-size schedules of the form alpha_k = alpha/(k+1+k0)^a, beta_k = beta/(k+1+k0)^b.

The constant-step variant used by the exponential regime is the same record
with a = b = 0.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.utils.errors import ConfigurationError

A_MIN_MARGIN = 1e-9


@dataclass(frozen=True)
class StepSchedule:
    alpha: float
    beta: float
    a: float
    b: float = 1.0
    k0: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0 and np.isfinite(self.alpha)):
            raise ConfigurationError(f"alpha must be positive and finite, got {self.alpha}")
        if not (self.beta > 0 and np.isfinite(self.beta)):
            raise ConfigurationError(f"beta must be positive and finite, got {self.beta}")
        if not (self.k0 >= 0 and np.isfinite(self.k0)):
            raise ConfigurationError(f"k0 must be nonnegative, got {self.k0}")
        if self.is_constant:
            return
        if not (0.5 < self.a <= 1.0):
            raise ConfigurationError(f"fast exponent a must lie in (1/2, 1], got {self.a}")
        if self.b < 0:
            raise ConfigurationError(f"slow exponent b must be nonnegative, got {self.b}")

    @classmethod
    def constant(cls, alpha: float, beta: float) -> "StepSchedule":
        """Constant steps alpha_k = alpha, beta_k = beta."""
        return cls(alpha=alpha, beta=beta, a=0.0, b=0.0, k0=0.0)

    @property
    def is_constant(self) -> bool:
        return self.a == 0.0 and self.b == 0.0

    def ratio(self, k: int) -> float:
        """beta_k / alpha_k, the weight of the fast residual in the Lyapunov function."""
        if self.is_constant:
            return self.beta / self.alpha
        alpha_k, beta_k = step_sizes(k, self)
        return beta_k / alpha_k

    def arrays(self, k_start: int, count: int) -> Tuple[np.ndarray, np.ndarray]:
        """Step sizes for k_start, ..., k_start+count-1 as float64 arrays."""
        if self.is_constant:
            return np.full(count, float(self.alpha)), np.full(count, float(self.beta))
        base = np.arange(k_start, k_start + count, dtype=np.float64) + 1.0 + float(self.k0)
        return self.alpha / base ** self.a, self.beta / base ** self.b

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "a": self.a, "b": self.b, "k0": self.k0}

    @classmethod
    def from_dict(cls, data: dict) -> "StepSchedule":
        try:
            return cls(
                alpha=float(data["alpha"]),
                beta=float(data["beta"]),
                a=float(data["a"]),
                b=float(data.get("b", 1.0)),
                k0=float(data.get("k0", 0.0)),
            )
        except KeyError as exc:
            raise ConfigurationError(f"schedule is missing field {exc.args[0]!r}") from exc


def step_sizes(k: int, sched: StepSchedule) -> Tuple[float, float]:
    """Return (alpha_k, beta_k)."""
    if k < 0:
        raise ConfigurationError(f"iteration index must be nonnegative, got {k}")
    if sched.is_constant:
        return float(sched.alpha), float(sched.beta)
    base = float(k) + 1.0 + float(sched.k0)
    return sched.alpha / base ** sched.a, sched.beta / base ** sched.b

"""
Problem records shared by the benchmark instances.

Operators act on the last axis and broadcast over leading axes, so the
harness can evaluate a whole (replicates, d) batch in one call.
"""
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from src.planner.constants import AssumptionConstants
from src.utils.errors import ConfigurationError

Operator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DerivativeCheck:
    """An analytic derivative paired with the scalar function it differentiates.

    ``wrt`` names the argument ("x" or "y") the finite difference moves;
    ``kinks`` lists coordinates of that argument where the derivative is
    continuous but not differentiable.
    """
    name: str
    function: Callable[[np.ndarray, np.ndarray], float]
    derivative: Callable[[np.ndarray, np.ndarray], np.ndarray]
    wrt: str = "x"
    kinks: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.wrt not in ("x", "y"):
            raise ConfigurationError(f"derivative check {self.name!r}: wrt must be 'x' or 'y', got {self.wrt!r}")


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    name: str
    d1: int
    d2: int
    f: Operator
    g: Operator
    lambda_map: Callable[[np.ndarray], np.ndarray]
    x_star: np.ndarray
    y_star: np.ndarray
    consts: AssumptionConstants
    slow_noise: bool = True
    verify_box: float = 5.0
    derivative_checks: Tuple[DerivativeCheck, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1:
            raise ConfigurationError(f"problem dimensions must be positive, got ({self.d1}, {self.d2})")
        for name in ("x_star", "y_star"):
            arr = np.array(getattr(self, name), dtype=np.float64).reshape(-1)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.x_star.shape != (self.d1,) or self.y_star.shape != (self.d2,):
            raise ConfigurationError(f"fixed point of {self.name!r} does not match dimensions ({self.d1}, {self.d2})")

    @property
    def fixed_point(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.x_star, self.y_star

    def describe(self) -> dict:
        return {
            "name": self.name,
            "d1": self.d1,
            "d2": self.d2,
            "slow_noise": self.slow_noise,
            "constants": self.consts.to_dict(),
        }

from typing import Optional, Protocol, runtime_checkable

import numpy as np


@runtime_checkable
class IOperatorPair(Protocol):
    """Drift operators of the coupled iteration.

    Operators act on the last axis and broadcast over leading axes, so a
    batch of replicates of shape (R, d) is evaluated in one call.
    """
    d1: int
    d2: int

    def f(self, x: np.ndarray, y: np.ndarray) -> np.ndarray: ...
    def g(self, x: np.ndarray, y: np.ndarray) -> np.ndarray: ...


@runtime_checkable
class IProblem(IOperatorPair, Protocol):
    """Operators plus what residuals need: the lambda map and the slow fixed point."""
    y_star: Optional[np.ndarray]

    def lambda_map(self, y: np.ndarray) -> np.ndarray: ...


@runtime_checkable
class IAssumptionConstants(Protocol):
    L_lambda: float
    L_f: float
    mu_f: float
    L_g: float
    mu_g: float

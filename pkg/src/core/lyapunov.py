"""Lyapunov functional V = c (beta_k/alpha_k) ||x_hat||^2 + ||y_hat||^2, c = 4 L_g^2 / (mu_f mu_g)."""
from dataclasses import dataclass

from src.core.interfaces import IAssumptionConstants
from src.core.iteration import Residuals
from src.core.schedule import StepSchedule


@dataclass(frozen=True)
class LyapunovValue:
    v: float
    c: float


def coupling_constant(consts: IAssumptionConstants) -> float:
    return 4.0 * consts.L_g ** 2 / (consts.mu_f * consts.mu_g)


def lyapunov_from_norms(x_hat_sq, y_hat_sq, ratio: float, c: float):
    """V from squared residual norms; accepts scalars or arrays."""
    return c * ratio * x_hat_sq + y_hat_sq


def lyapunov(res: Residuals, sched: StepSchedule, k: int, consts: IAssumptionConstants) -> LyapunovValue:
    c = coupling_constant(consts)
    v = lyapunov_from_norms(res.x_hat_sq, res.y_hat_sq, sched.ratio(k), c)
    return LyapunovValue(v=float(v), c=c)

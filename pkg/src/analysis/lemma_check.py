"""
Monte-Carlo check of the one-step Lyapunov recursion

    E[V_{k+1}] <= (1 - mu_g beta_k / 2) V_k + C(alpha_0, beta_0) alpha_k^2 V_k
                  + c 2 alpha_k beta_k E||xi||^2 + w_k E||psi||^2

with the exact noise variances in place of their bounds.
"""
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from src.core.iteration import IterateState, residuals
from src.core.lyapunov import lyapunov_from_norms
from src.core.schedule import StepSchedule, step_sizes
from src.noise.rng import RngStream
from src.noise.sampler import sample_batch, target_variances
from src.noise.spec import NoiseKind, NoiseSpec
from src.planner.plans import lemma3_constant, lemma3_ratio_threshold
from src.problems.spec import ProblemSpec
from src.utils.errors import PreconditionError
from src.utils.log import get_logger

logger = get_logger("LemmaCheck")


@dataclass
class StateBound:
    v_k: float
    mean_next: float
    stderr_next: float
    rhs: float
    margin: float  # (rhs - mean_next) in standard errors; raw difference when stderr is 0


@dataclass
class BoundReport:
    k: int
    mc_samples: int
    states: List[StateBound] = field(default_factory=list)

    @property
    def margins(self) -> np.ndarray:
        return np.array([s.margin for s in self.states])

    @property
    def min_margin(self) -> float:
        return float(self.margins.min()) if self.states else float("inf")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "mc_samples": self.mc_samples,
            "min_margin": self.min_margin,
            "states": [vars(s) for s in self.states],
        }


def psi_coefficient(consts, alpha_k: float, beta_k: float) -> float:
    Lf, Ll, mf, c = consts.L_f, consts.L_lambda, consts.mu_f, consts.c
    return c * (
        (2 / mf) * Lf ** 2 * beta_k ** 3 / alpha_k ** 2
        + (2 / mf) * Lf ** 2 * Ll ** 2 * beta_k ** 3
        + 2 * Ll ** 2 * beta_k ** 3 / alpha_k
    ) + beta_k ** 2


def check_lemma3_bound(
    problem: ProblemSpec,
    noise: NoiseSpec,
    sched: StepSchedule,
    k: int,
    states: Sequence[IterateState],
    mc_samples: int,
    rng: RngStream,
) -> BoundReport:
    consts = problem.consts
    c = consts.c
    alpha_k, beta_k = step_sizes(k, sched)
    alpha0, beta0 = step_sizes(0, sched)
    threshold = lemma3_ratio_threshold(consts, alpha0, beta0)
    if alpha_k / beta_k < threshold:
        raise PreconditionError(
            f"alpha_k/beta_k = {alpha_k / beta_k:.6g} below the one-step bound threshold {threshold:.6g}"
        )
    C = lemma3_constant(consts, alpha0, beta0)
    w_psi = psi_coefficient(consts, alpha_k, beta_k)
    ratio_k, ratio_next = sched.ratio(k), sched.ratio(k + 1)
    n = 1 if noise.kind is NoiseKind.NONE else int(mc_samples)

    report = BoundReport(k=k, mc_samples=n)
    for state in states:
        res = residuals(state, problem)
        v_k = float(lyapunov_from_norms(res.x_hat_sq, res.y_hat_sq, ratio_k, c))
        s_xi, s_psi = target_variances(noise, res, k, sched.k0)
        if not problem.slow_noise:
            s_psi = 0.0
        rhs = (
            (1 - consts.mu_g * beta_k / 2) * v_k
            + C * alpha_k ** 2 * v_k
            + c * 2 * alpha_k * beta_k * s_xi
            + w_psi * s_psi
        )

        xi, psi = sample_batch(noise, res, k, sched.k0, rng, problem.d1, problem.d2, n, problem.slow_noise)
        x_next = state.x - alpha_k * (problem.f(state.x, state.y) + xi)
        y_next = state.y - beta_k * (problem.g(state.x, state.y) + psi)
        x_hat = x_next - problem.lambda_map(y_next)
        y_hat = y_next - problem.y_star
        v_next = lyapunov_from_norms(np.sum(x_hat ** 2, axis=-1), np.sum(y_hat ** 2, axis=-1), ratio_next, c)

        mean = float(np.mean(v_next))
        stderr = float(np.std(v_next, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        margin = (rhs - mean) / stderr if stderr > 0 else rhs - mean
        report.states.append(StateBound(v_k=v_k, mean_next=mean, stderr_next=stderr, rhs=rhs, margin=margin))

    logger.info(f"one-step bound at k={k}: {len(report.states)} states, min margin {report.min_margin:.4g}")
    return report

"""
Executable plans from the convergence theorems.

theorem1_plan  state noise, polynomial rate M/(k+k0)^t with t = max m(x)
theorem2_plan  quadratic noise, constant steps, E[V_k] <= e^(-eps k) V0
theorem3_plan  time noise, polynomial rate with t = (2 + 2 g1 + g2)/3

Strict mode derives k0 (and M) from the bounds and records every violated
precondition; practical mode takes the user's k0 and only reports.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import fixed_point

from src.core.schedule import StepSchedule
from src.noise.spec import MatrixLike, as_matrix
from src.planner.constants import AssumptionConstants
from src.planner.envelope import RatePair, solve_rate_state, solve_rate_time
from src.utils.errors import InfeasibleError, NumericError
from src.utils.log import get_logger

logger = get_logger("RatePlanner")

FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAXITER = 200
Q_FLOOR = 1e-30
THRESHOLD_RTOL = 1e-12


@dataclass
class RatePlan:
    mode: str
    schedule: StepSchedule
    M: float
    rates: Optional[RatePair] = None
    epsilon: Optional[float] = None
    constants: Dict[str, float] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)
    strict: bool = True

    @property
    def feasible(self) -> bool:
        return not self.violations

    def bound(self, k):
        """Planned bound on E[V_k]; vectorises over k."""
        k = np.asarray(k, dtype=np.float64)
        if self.epsilon is not None:
            return self.M * np.exp(-self.epsilon * k)
        with np.errstate(divide="ignore"):
            return self.M / (k + self.schedule.k0) ** self.rates.t

    def require_feasible(self) -> "RatePlan":
        if not self.feasible:
            raise InfeasibleError(self.violations)
        return self

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "strict": self.strict,
            "a": None if self.rates is None else self.rates.a,
            "t": None if self.rates is None else self.rates.t,
            "epsilon": self.epsilon,
            "M": self.M,
            "schedule": self.schedule.to_dict(),
            "constants": dict(self.constants),
            "feasible": self.feasible,
            "violations": list(self.violations),
        }


# ------------------------------------------------------------------ #
#  Shared constants                                                    #
# ------------------------------------------------------------------ #

def _safe_pow(base: float, exponent: float) -> float:
    try:
        return float(base) ** float(exponent)
    except OverflowError:
        return math.inf


def lemma3_constant(consts: AssumptionConstants, alpha0: float, beta0: float) -> float:
    """C(alpha0, beta0) of the one-step Lyapunov recursion."""
    Lf, Ll, Lg, mg = consts.L_f, consts.L_lambda, consts.L_g, consts.mu_g
    c = consts.c
    r = beta0 / alpha0
    return (
        Lf ** 2
        + 4 * Ll ** 2 * Lg ** 2 * r ** 2
        + 2 * Lf * Ll * Lg * r
        + (2 / mg) * Lf ** 2 * Ll ** 2 * Lg ** 2 * (Ll + 1) ** 2 * beta0
        + (1 / c) * Lg ** 2 * (Ll + 2) * r
        + c * 4 * Ll ** 2 * Lg ** 2 * (Ll + 1) ** 2 * r ** 3
        + Lg ** 2 * (2 * Ll ** 2 + Ll + 3) * r ** 2
    )


def ratio_threshold(consts: AssumptionConstants) -> float:
    """Lower bound on alpha/beta (and on omega in the exponential mode)."""
    Ll, Lg, mf, mg = consts.L_lambda, consts.L_g, consts.mu_f, consts.mu_g
    coupling = (4 / mf) * (2 * Ll * Lg + (2 / mg) * Ll ** 2 * Lg ** 2 * (Ll + 1) ** 2)
    return max(coupling, 2 * consts.c, mg / mf, 1.0)


def lemma3_ratio_threshold(consts: AssumptionConstants, alpha0: float, beta0: float) -> float:
    """Lower bound on alpha_k/beta_k under which the one-step recursion holds."""
    Ll, Lg, mf, mg = consts.L_lambda, consts.L_g, consts.mu_f, consts.mu_g
    coupling = (4 / mf) * (2 * Ll * Lg + (2 / mg) * Ll ** 2 * Lg ** 2 * (Ll + 1) ** 2)
    return max(coupling, 2 * consts.c, mg / mf, alpha0 / beta0)


def beta_threshold(rates: RatePair, consts: AssumptionConstants) -> float:
    return (2 / consts.mu_g) * (2 * rates.a + rates.t)


def psi_weight(consts: AssumptionConstants) -> float:
    """c (2/mu_f L_f^2 + 2/mu_f L_f^2 L_lambda^2 + 2 L_lambda^2) + 1."""
    Lf, Ll, mf = consts.L_f, consts.L_lambda, consts.mu_f
    return consts.c * ((2 / mf) * Lf ** 2 + (2 / mf) * Lf ** 2 * Ll ** 2 + 2 * Ll ** 2) + 1


def minimal_k0(alpha: float, beta: float, rates: RatePair, c_ab: float) -> Tuple[float, Dict[str, float]]:
    """Smallest shift satisfying the five k0 bounds; returns (k0, individual bounds)."""
    a, t = rates.a, rates.t
    inv = 1.0 / (2 * a - 1)
    bounds = {
        "k0_alpha": _safe_pow(alpha, 1.0 / a),
        "k0_ratio": _safe_pow(_safe_pow(alpha, 2) / beta, inv),
        "k0_t": 1.0 / (2.0 ** (1.0 / t) - 1.0),
        "k0_a": 1.0 / (2.0 ** (1.0 / (2 * a)) - 1.0),
        "k0_C": _safe_pow(6 * c_ab * _safe_pow(alpha, 2), inv),
    }
    return max(bounds.values()), bounds


def _schedule_checks(
    consts: AssumptionConstants,
    rates: RatePair,
    alpha: float,
    beta: float,
    k0_user: Optional[float],
    strict: bool,
) -> Tuple[float, Dict[str, float], List[str]]:
    violations = []
    omega_min = ratio_threshold(consts)
    beta_min = beta_threshold(rates, consts)
    if alpha / beta < omega_min * (1 - THRESHOLD_RTOL):
        violations.append(f"alpha/beta = {alpha / beta:.6g} below threshold {omega_min:.6g}")
    if beta < beta_min * (1 - THRESHOLD_RTOL):
        violations.append(f"beta = {beta:.6g} below (2/mu_g)(2a+t) = {beta_min:.6g}")
    c_ab = lemma3_constant(consts, alpha, beta)
    k0_min, k0_bounds = minimal_k0(alpha, beta, rates, c_ab)
    if strict and k0_user is None:
        k0 = k0_min
    else:
        k0 = 0.0 if k0_user is None else float(k0_user)
        if k0 < k0_min:
            violations.append(f"k0 = {k0:.6g} below required {k0_min:.6g}")
    if not math.isfinite(k0):
        violations.append("k0 bound is not finite")
        k0 = 0.0 if k0_user is None else float(k0_user)
    constants = {
        "c": consts.c,
        "C_alpha_beta": c_ab,
        "ratio_threshold": omega_min,
        "beta_threshold": beta_min,
        "k0_min": k0_min,
        **k0_bounds,
    }
    return k0, constants, violations


def _finish(plan: RatePlan) -> RatePlan:
    if plan.feasible:
        logger.info(f"{plan.mode} plan feasible")
    else:
        log = logger.info if plan.strict else logger.warning
        for violation in plan.violations:
            log(f"{plan.mode} plan constraint failed: {violation}")
    return plan


# ------------------------------------------------------------------ #
#  State-dependent noise                                               #
# ------------------------------------------------------------------ #

def c2_state(consts: AssumptionConstants, gamma: MatrixLike, delta: MatrixLike,
             alpha: float, beta: float, M: float) -> float:
    (g11, g12), (g21, g22) = as_matrix(gamma)
    (d11, d12), (d21, d22) = as_matrix(delta)
    c = consts.c
    fast = (1 / c) * (alpha / beta) * 2 * M
    slow = 2 * M
    w = (beta ** 3 / alpha ** 2) * psi_weight(consts)
    return (
        c * 2 * alpha * beta * g11 * fast ** d11
        + c * 2 * alpha * beta * g12 * slow ** d12
        + w * g21 * fast ** d21
        + w * g22 * slow ** d22
    )


def solve_M(floor: float, a: float, c2) -> float:
    """Smallest-iterate fixed point of M = max(floor, (3/a) C2(M))."""
    def update(M):
        return max(floor, (3.0 / a) * c2(max(float(M), 0.0)))

    iterates = []

    def tracked(M):
        iterates.append(float(M))
        return update(M)

    M0 = max(floor, 1.0)
    try:
        M = float(fixed_point(tracked, M0, xtol=FIXED_POINT_TOL, maxiter=FIXED_POINT_MAXITER, method="del2"))
    except RuntimeError as exc:
        last = iterates[-2:] if len(iterates) >= 2 else [M0, update(M0)]
        raise NumericError(
            f"M fixed point did not converge: {exc} (last iterates {last[0]:.17g}, {last[1]:.17g})"
        ) from exc
    M = max(M, 0.0)
    return max(M, update(M))


def theorem1_plan(
    consts: AssumptionConstants,
    delta: MatrixLike,
    alpha: float,
    beta: float,
    V0: float,
    *,
    gamma: MatrixLike = 0.0,
    k0: Optional[float] = None,
    strict: bool = True,
) -> RatePlan:
    rates = solve_rate_state(delta)
    k0_used, constants, violations = _schedule_checks(consts, rates, alpha, beta, k0, strict)
    schedule = StepSchedule(alpha=alpha, beta=beta, a=rates.a, b=1.0, k0=k0_used)

    def c2(M):
        return c2_state(consts, gamma, delta, alpha, beta, M)

    floor = 3.0 * _safe_pow(k0_used, rates.t) * V0
    M = solve_M(floor, rates.a, c2)
    alpha0, beta0 = alpha / (1 + k0_used) ** rates.a, beta / (1 + k0_used)
    constants.update({
        "C_alpha0_beta0": lemma3_constant(consts, alpha0, beta0),
        "C1": constants["C_alpha_beta"] * alpha ** 2 * 2 * M,
        "C2": c2(M),
        "delta_max": max(max(row) for row in as_matrix(delta)),
    })
    return _finish(RatePlan(mode="state", schedule=schedule, M=M, rates=rates,
                            constants=constants, violations=violations, strict=strict))


# ------------------------------------------------------------------ #
#  Quadratic noise, constant steps                                     #
# ------------------------------------------------------------------ #

def beta_split(consts: AssumptionConstants) -> Tuple[float, float]:
    """(B1, B2) with C_beta = B1 + B2 beta."""
    Lf, Ll, Lg, mg = consts.L_f, consts.L_lambda, consts.L_g, consts.mu_g
    c = consts.c
    B1 = (
        Lf ** 2
        + 4 * Ll ** 2 * Lg ** 2
        + 2 * Lf * Ll * Lg
        + (1 / c) * Lg ** 2 * (Ll + 2)
        + c * 4 * Ll ** 2 * Lg ** 2 * (Ll + 1) ** 2
        + Lg ** 2 * (2 * Ll ** 2 + Ll + 3)
    )
    B2 = (2 / mg) * Lf ** 2 * Ll ** 2 * Lg ** 2 * (Ll + 1) ** 2
    return B1, B2


def d_coefficients(consts: AssumptionConstants, gamma: MatrixLike, omega: float) -> Tuple[float, float, float]:
    (g11, g12), (g21, g22) = as_matrix(gamma)
    Lf, Ll, mf, mg = consts.L_f, consts.L_lambda, consts.mu_f, consts.mu_g
    c = consts.c
    B1, B2 = beta_split(consts)
    slow = g21 * (1 / c) * omega + g22
    D1 = -0.5 * mg + c * (2 / mf) * Lf ** 2 / omega ** 2 * slow
    D2 = B1 * omega ** 2 + c * 2 * omega * (g11 * (1 / c) * omega + g12) + (c * 2 * Ll ** 2 / omega + 1) * slow
    D3 = B2 * omega ** 2 + c * (2 / mf) * Lf ** 2 * Ll ** 2 * slow
    return D1, D2, D3


def contraction_factor(d: Tuple[float, float, float], beta: float) -> float:
    D1, D2, D3 = d
    return 1.0 + D1 * beta + D2 * beta ** 2 + D3 * beta ** 3


def optimal_beta(d: Tuple[float, float, float], beta_cap: float) -> float:
    """Minimiser of the contraction factor over (0, beta_cap]; q is convex there.

    Returns 0 when q is nondecreasing from beta = 0, i.e. no step contracts.
    """
    D1, D2, D3 = d
    if D1 >= 0:
        return 0.0
    if D3 > 0:
        disc = 4 * D2 ** 2 - 12 * D3 * D1
        if disc < 0:
            return 0.0
        root = (-2 * D2 + math.sqrt(disc)) / (6 * D3)
    elif D2 > 0:
        root = -D1 / (2 * D2)
    else:
        root = beta_cap
    return min(max(root, 0.0), beta_cap)


def theorem2_plan(
    consts: AssumptionConstants,
    gamma_mat: MatrixLike,
    omega: float,
    beta_cap: float = 1.0,
    *,
    V0: float = 1.0,
) -> RatePlan:
    violations = []
    omega_min = ratio_threshold(consts)
    if omega < omega_min * (1 - THRESHOLD_RTOL):
        violations.append(f"omega = {omega:.6g} below threshold {omega_min:.6g}")
    d = d_coefficients(consts, gamma_mat, omega)
    D1, D2, D3 = d
    if D1 > -0.25 * consts.mu_g:
        violations.append(f"omega too small: D1 = {D1:.6g} > -mu_g/4")
    beta_star = optimal_beta(d, beta_cap)
    q = contraction_factor(d, beta_star) if beta_star > 0 else 1.0
    if not (beta_star > 0 and q < 1.0):
        violations.append(f"no beta in (0, {beta_cap:.6g}] with contraction factor below 1")
    epsilon = -math.log(max(q, Q_FLOOR))
    B1, B2 = beta_split(consts)
    schedule = StepSchedule.constant(alpha=omega * beta_star if beta_star > 0 else omega * beta_cap,
                                     beta=beta_star if beta_star > 0 else beta_cap)
    constants = {
        "c": consts.c, "B1": B1, "B2": B2, "D1": D1, "D2": D2, "D3": D3,
        "omega": omega, "ratio_threshold": omega_min, "beta_star": beta_star, "q": q,
    }
    return _finish(RatePlan(mode="quadratic", schedule=schedule, M=V0, epsilon=epsilon,
                            constants=constants, violations=violations))


# ------------------------------------------------------------------ #
#  Time-dependent noise                                                #
# ------------------------------------------------------------------ #

def c2_time(consts: AssumptionConstants, gamma_prime: Tuple[float, float], alpha: float, beta: float) -> float:
    p11, p22 = gamma_prime
    return consts.c * 2 * alpha * beta * p11 + (beta ** 3 / alpha ** 2) * psi_weight(consts) * p22


def theorem3_plan(
    consts: AssumptionConstants,
    gamma1: float,
    gamma2: float,
    alpha: float,
    beta: float,
    V0: float,
    *,
    gamma_prime: Tuple[float, float] = (0.0, 0.0),
    k0: Optional[float] = None,
    strict: bool = True,
) -> RatePlan:
    rates = solve_rate_time(gamma1, gamma2)
    k0_used, constants, violations = _schedule_checks(consts, rates, alpha, beta, k0, strict)
    schedule = StepSchedule(alpha=alpha, beta=beta, a=rates.a, b=1.0, k0=k0_used)
    c2 = c2_time(consts, gamma_prime, alpha, beta)
    M = max(3.0 * _safe_pow(k0_used, rates.t) * V0, (3.0 / rates.a) * c2)
    alpha0, beta0 = alpha / (1 + k0_used) ** rates.a, beta / (1 + k0_used)
    constants.update({
        "C_alpha0_beta0": lemma3_constant(consts, alpha0, beta0),
        "C1": constants["C_alpha_beta"] * alpha ** 2 * 2 * M,
        "C2_prime": c2,
    })
    return _finish(RatePlan(mode="time", schedule=schedule, M=M, rates=rates,
                            constants=constants, violations=violations, strict=strict))

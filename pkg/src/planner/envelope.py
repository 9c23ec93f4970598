"""
Optimal step exponents.

State noise: maximise the lower envelope m(x) of four lines over (1/2, 1].
The two increasing lines cross the two decreasing ones strictly inside the
interval, so the maximiser is one of the four pairwise intersections.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.noise.spec import MatrixLike, as_matrix
from src.utils.errors import ConfigurationError, DomainError, InfeasibleError

A_GUARD = 0.5 + 1e-9
TIE_TOL = 1e-15


@dataclass(frozen=True)
class RatePair:
    """Fast exponent a and predicted decay exponent t of E[V_k] = O(k^-t)."""
    a: float
    t: float

    def __post_init__(self):
        if not (0.5 < self.a <= 1.0):
            raise ConfigurationError(f"rate exponent a must lie in (1/2, 1], got {self.a}")
        if not self.t > 0:
            raise ConfigurationError(f"decay exponent t must be positive, got {self.t}")


def _lines(delta: MatrixLike) -> Tuple[List[Tuple[float, float]], List[Tuple[float, float]]]:
    """(slope, intercept) of the increasing and decreasing lines of m."""
    (d11, d12), (d21, d22) = as_matrix(delta)
    if max(d11, d12, d21, d22) >= 1.0:
        raise DomainError("m(x) is undefined for delta_ij = 1; use the exponential (quadratic) mode")
    if min(d11, d12, d21, d22) < 0.0:
        raise DomainError("delta_ij must be nonnegative")
    D11, D12, D21, D22 = 1 - d11, 1 - d12, 1 - d21, 1 - d22
    increasing = [((1 + d11) / D11, -d11 / D11), (1 / D12, 0.0)]
    decreasing = [(-(2 - d21) / D21, (2 - d21) / D21), (-2 / D22, 2 / D22)]
    return increasing, decreasing


def m_envelope(x: float, delta: MatrixLike) -> float:
    increasing, decreasing = _lines(delta)
    return min(s * x + c for s, c in increasing + decreasing)


def solve_rate_state(delta: MatrixLike) -> RatePair:
    increasing, decreasing = _lines(delta)
    candidates = []
    for s_inc, c_inc in increasing:
        for s_dec, c_dec in decreasing:
            x = (c_dec - c_inc) / (s_inc - s_dec)
            if 0.5 < x <= 1.0:
                candidates.append(x)
    if not candidates:
        raise DomainError("no line intersection inside (1/2, 1]")
    best_a, best_t = None, -np.inf
    for x in sorted(candidates):
        value = m_envelope(x, delta)
        if value > best_t + TIE_TOL:
            best_a, best_t = x, value
    return RatePair(a=max(best_a, A_GUARD), t=best_t)


def rate_state_closed_form(delta11: float, delta22: float) -> RatePair:
    """Exponents when delta11 = delta12 and delta21 = delta22."""
    D11, D22 = 1.0 - delta11, 1.0 - delta22
    return RatePair(a=(D11 + D22) / (D11 + 2 * D22), t=(1 + D22) / (D11 + 2 * D22))


def solve_rate_time(gamma1: float, gamma2: float) -> RatePair:
    violations = []
    if gamma1 < 0 or gamma2 < 0:
        violations.append(f"gamma_i >= 0 (got gamma1={gamma1}, gamma2={gamma2})")
    gap = gamma1 - gamma2
    if not (-1.0 <= gap < 0.5):
        violations.append(f"gamma1 - gamma2 in [-1, 1/2) (got {gap})")
    a = (2.0 - gamma1 + gamma2) / 3.0
    t = (2.0 + 2.0 * gamma1 + gamma2) / 3.0
    if not (A_GUARD <= a <= 1.0):
        violations.append(f"a = (2 - gamma1 + gamma2)/3 in (1/2, 1] (got {a})")
    if violations:
        raise InfeasibleError(violations)
    lhs = -1.0 + 2.0 * a
    if not (np.isclose(lhs, -1.0 + a + t - gamma1, rtol=0, atol=1e-12)
            and np.isclose(lhs, -3.0 + 4.0 * a + t - gamma2, rtol=0, atol=1e-12)):
        raise InfeasibleError([f"exponent balance identities fail for (a, t) = ({a}, {t})"])
    return RatePair(a=a, t=t)

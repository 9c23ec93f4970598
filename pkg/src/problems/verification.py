"""
Empirical check of the assumption constants on a sampling box.

Four inequalities are evaluated on random pairs:

    lipschitz_f   ||f1 - f2|| <= L_f (||dx|| + ||dy||)
    monotone_f    <dx, f(x1, y) - f(x2, y)> >= mu_f ||dx||^2   (common y)
    lipschitz_g   ||g1 - g2|| <= L_g (||dx|| + ||dy||)
    monotone_g    <y_hat, g(lambda(y), y)> >= mu_g ||y_hat||^2
"""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.problems.spec import ProblemSpec
from src.utils.errors import VerificationError
from src.utils.log import get_logger

logger = get_logger("Verify")

DEFAULT_SLACK = 1e-9


@dataclass
class ConstantCheck:
    name: str
    constant: float
    worst_ratio: float  # empirical sup (Lipschitz) or inf (monotone) of the ratio
    passed: bool
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "constant": self.constant,
            "worst_ratio": self.worst_ratio,
            "passed": self.passed,
            "witness": self.witness,
        }


@dataclass
class VerificationReport:
    problem: str
    box: float
    n: int
    checks: List[ConstantCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def witnesses(self) -> list:
        return [dict(check.witness, check=check.name) for check in self.checks if not check.passed]

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "box": self.box,
            "n": self.n,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }


def _norm(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(v * v, axis=-1))


def _dot(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.sum(u * v, axis=-1)


def _witness(i: int, **arrays) -> dict:
    return {name: np.asarray(arr[i]).tolist() for name, arr in arrays.items()}


def _upper_check(name, constant, lhs, denom, slack, **pair) -> ConstantCheck:
    """lhs <= constant * denom, i.e. a Lipschitz bound."""
    rhs = constant * denom
    gap = lhs - rhs - slack * (1.0 + np.abs(rhs))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(denom > 0, lhs / np.where(denom > 0, denom, 1.0), 0.0)
    worst = int(np.argmax(gap))
    passed = bool(gap[worst] <= 0)
    return ConstantCheck(
        name=name,
        constant=constant,
        worst_ratio=float(np.max(ratios)),
        passed=passed,
        witness=None if passed else _witness(worst, **pair),
    )


def _lower_check(name, constant, lhs, denom, slack, **pair) -> ConstantCheck:
    """lhs >= constant * denom, i.e. a strong-monotonicity bound."""
    rhs = constant * denom
    gap = rhs - lhs - slack * (1.0 + np.abs(rhs))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(denom > 0, lhs / np.where(denom > 0, denom, 1.0), np.inf)
    worst = int(np.argmax(gap))
    passed = bool(gap[worst] <= 0)
    finite = ratios[np.isfinite(ratios)]
    return ConstantCheck(
        name=name,
        constant=constant,
        worst_ratio=float(np.min(finite)) if finite.size else float("nan"),
        passed=passed,
        witness=None if passed else _witness(worst, **pair),
    )


def check_pairs(spec: ProblemSpec, x1, y1, x2, y2, slack: float = DEFAULT_SLACK) -> List[ConstantCheck]:
    """Evaluate the four inequalities on explicit pairs of shape (n, d)."""
    consts = spec.consts
    x1, y1, x2, y2 = (np.atleast_2d(np.asarray(v, dtype=np.float64)) for v in (x1, y1, x2, y2))
    dx, dy = x1 - x2, y1 - y2
    dist = _norm(dx) + _norm(dy)

    df = spec.f(x1, y1) - spec.f(x2, y2)
    dg = spec.g(x1, y1) - spec.g(x2, y2)
    df_common_y = spec.f(x1, y1) - spec.f(x2, y1)
    y_hat = y1 - spec.y_star
    g_on_manifold = spec.g(spec.lambda_map(y1), y1)

    pair = {"x1": x1, "y1": y1, "x2": x2, "y2": y2}
    return [
        _upper_check("lipschitz_f", consts.L_f, _norm(df), dist, slack, **pair),
        _lower_check("monotone_f", consts.mu_f, _dot(dx, df_common_y), _dot(dx, dx), slack, **pair),
        _upper_check("lipschitz_g", consts.L_g, _norm(dg), dist, slack, **pair),
        _lower_check("monotone_g", consts.mu_g, _dot(y_hat, g_on_manifold), _dot(y_hat, y_hat), slack, **pair),
    ]


def verify_constants(
    spec: ProblemSpec,
    box: Optional[float] = None,
    n: int = 10_000,
    seed: int = 0,
    *,
    slack: float = DEFAULT_SLACK,
    raise_on_failure: bool = True,
) -> VerificationReport:
    """Sample n pairs uniformly in [-box, box]^(d1+d2) and check every constant.

    Raises VerificationError listing the witness pairs when a check fails,
    unless ``raise_on_failure`` is False.
    """
    box = spec.verify_box if box is None else float(box)
    rng = np.random.Generator(np.random.Philox(seed))
    x1 = rng.uniform(-box, box, size=(n, spec.d1))
    y1 = rng.uniform(-box, box, size=(n, spec.d2))
    x2 = rng.uniform(-box, box, size=(n, spec.d1))
    y2 = rng.uniform(-box, box, size=(n, spec.d2))

    report = VerificationReport(problem=spec.name, box=box, n=n, checks=check_pairs(spec, x1, y1, x2, y2, slack))
    for check in report.checks:
        logger.info(
            f"{spec.name} {check.name}: constant {check.constant:g}, empirical {check.worst_ratio:.6g}"
            f" {'ok' if check.passed else 'VIOLATED'}"
        )
    if raise_on_failure and not report.passed:
        raise VerificationError(f"{spec.name}: assumption constants violated", report.witnesses)
    return report

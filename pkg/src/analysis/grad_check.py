"""Central-difference checks of analytic derivatives against their scalar functions."""
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

import numpy as np

from src.utils.errors import ConfigurationError
from src.utils.log import get_logger

logger = get_logger("GradCheck")

DEFAULT_H = 1e-5


@dataclass
class GradCheckReport:
    h: float
    errors: Dict[str, float] = field(default_factory=dict)
    skipped: Dict[str, int] = field(default_factory=dict)

    @property
    def max_error(self) -> float:
        return max(self.errors.values(), default=0.0)

    def to_dict(self) -> dict:
        return {"h": self.h, "max_error": self.max_error, "errors": dict(self.errors), "skipped": dict(self.skipped)}


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(1.0, abs(analytic))


def _near_kink(v: np.ndarray, kinks: Tuple[float, ...], h: float) -> bool:
    return any(np.any(np.abs(v - kink) <= 2 * h) for kink in kinks)


def grad_check(problem, points: Sequence[Tuple[np.ndarray, np.ndarray]], h: float = DEFAULT_H) -> GradCheckReport:
    """Max relative error of every derivative check over ``points``.

    ``problem`` is anything with ``derivative_checks`` or a sequence of
    DerivativeCheck. Points whose moved coordinate lies within 2h of a
    declared kink are skipped and counted.
    """
    if not h > 0:
        raise ConfigurationError(f"finite-difference step must be positive, got {h}")
    checks = getattr(problem, "derivative_checks", problem)
    report = GradCheckReport(h=h)
    for check in checks:
        worst, skipped = 0.0, 0
        for x, y in points:
            x = np.array(x, dtype=np.float64).reshape(-1)
            y = np.array(y, dtype=np.float64).reshape(-1)
            moved = x if check.wrt == "x" else y
            if check.kinks and _near_kink(moved, check.kinks, h):
                skipped += 1
                continue
            analytic = np.asarray(check.derivative(x, y), dtype=np.float64).reshape(-1)
            for j in range(moved.size):
                plus, minus = moved.copy(), moved.copy()
                plus[j] += h
                minus[j] -= h
                if check.wrt == "x":
                    numeric = (check.function(plus, y) - check.function(minus, y)) / (2 * h)
                else:
                    numeric = (check.function(x, plus) - check.function(x, minus)) / (2 * h)
                worst = max(worst, relative_error(float(analytic[j]), float(numeric)))
        report.errors[check.name] = worst
        if skipped:
            report.skipped[check.name] = skipped
        logger.debug(f"{check.name}: max relative error {worst:.3g} ({skipped} points skipped)")
    return report

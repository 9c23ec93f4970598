"""
Straight-line fits of the averaged Lyapunov series.

loglog    log V = slope log k + intercept    decay exponent t_hat = -slope
semilog   log V = slope k + intercept        contraction eps_hat = -slope
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.utils.errors import InsufficientDataError
from src.utils.log import get_logger

logger = get_logger("Fit")

DEFAULT_K_MIN = 1e5


@dataclass(frozen=True)
class FitResult:
    kind: str
    slope: float
    intercept: float
    r_squared: float
    residual_mse: float
    window: Tuple[float, float]
    n_points: int

    @property
    def rate(self) -> float:
        """-slope: the decay exponent (loglog) or per-iteration contraction (semilog)."""
        return -self.slope

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "residual_mse": self.residual_mse,
            "window": list(self.window),
            "n_points": self.n_points,
        }


def _window_points(summary, k_min: float, k_max: Optional[float], need_positive_k: bool):
    ks = summary.ks.astype(np.float64)
    vs = summary.mean_v
    if k_max is None:
        k_max = float(ks.max()) if ks.size else 0.0
    in_window = (ks >= k_min) & (ks <= k_max)
    if need_positive_k:
        in_window &= ks > 0
    usable = in_window & np.isfinite(vs) & (vs > 0)
    dropped = int(np.sum(in_window & ~usable))
    if dropped:
        logger.warning(f"{dropped} checkpoints with nonpositive or missing mean V excluded from the fit window")
    n = int(np.sum(usable))
    if n < 2:
        raise InsufficientDataError(
            f"fit window [{k_min:g}, {k_max:g}] holds {n} usable checkpoints, need at least 2"
        )
    return ks[usable], vs[usable], (float(k_min), float(k_max))


def _fit(kind: str, x: np.ndarray, y: np.ndarray, window) -> FitResult:
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    ss_res = float(np.sum(residuals ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        logger.warning("constant series in fit window; r_squared reported as 0")
        r_squared = 0.0
    else:
        r_squared = min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)
    return FitResult(
        kind=kind,
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        residual_mse=ss_res / x.size,
        window=window,
        n_points=int(x.size),
    )


def fit_loglog(summary, k_min: float = DEFAULT_K_MIN, k_max: Optional[float] = None) -> FitResult:
    ks, vs, window = _window_points(summary, k_min, k_max, need_positive_k=True)
    return _fit("loglog", np.log(ks), np.log(vs), window)


def fit_semilog(summary, k_min: float = DEFAULT_K_MIN, k_max: Optional[float] = None) -> FitResult:
    ks, vs, window = _window_points(summary, k_min, k_max, need_positive_k=False)
    return _fit("semilog", ks, np.log(vs), window)


FITTERS = {"loglog": fit_loglog, "semilog": fit_semilog}

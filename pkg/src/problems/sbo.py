"""
Stochastic bilevel instance.

    F(x, y) = 10 u^2 + 10 sin u,  G(x, y) = u^2 + sin y + y^2,  u = x + h2(y)

f is the gradient of F in x. g is the implicit-function hypergradient

    g = grad_y G - hess_yx F [hess_xx F]^-1 grad_x G

assembled from the analytic partials below; the correction cancels the
x-dependence exactly, leaving cos y + 2y up to rounding.
"""
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.optimize import brentq

from src.planner.constants import AssumptionConstants
from src.problems.spec import DerivativeCheck, ProblemSpec
from src.utils.errors import NumericError

ROOT_XTOL = 1e-14
HESSIAN_FLOOR = 10.0

SBO_CONSTANTS = AssumptionConstants(L_lambda=3.0, L_f=60.0, mu_f=10.0, L_g=3.0, mu_g=1.0)


def htilde2(z) -> Tuple[np.ndarray, np.ndarray]:
    """Smoothed quadratic: (value, derivative).

    sign(z) z^2 / 2 inside [-1, 1], sign(z)(|z| - 1/2) outside; C^1 at |z| = 1.
    """
    z = np.asarray(z, dtype=np.float64)
    mag = np.abs(z)
    inside = mag <= 1.0
    value = np.sign(z) * np.where(inside, 0.5 * z * z, mag - 0.5)
    derivative = np.where(inside, mag, 1.0)
    if value.ndim == 0:
        return float(value), float(derivative)
    return value, derivative


def _u(x, y):
    h, _ = htilde2(y)
    return np.asarray(x, dtype=np.float64) + h


# ------------------------------------------------------------------ #
#  Analytic partials                                                   #
# ------------------------------------------------------------------ #

def F(x, y):
    u = _u(x, y)
    return 10.0 * u ** 2 + 10.0 * np.sin(u)


def G(x, y):
    y = np.asarray(y, dtype=np.float64)
    return _u(x, y) ** 2 + np.sin(y) + y ** 2


def grad_x_F(x, y):
    u = _u(x, y)
    return 20.0 * u + 10.0 * np.cos(u)


def grad_y_F(x, y):
    _, dh = htilde2(y)
    return grad_x_F(x, y) * dh


def grad_x_G(x, y):
    return 2.0 * _u(x, y)


def grad_y_G(x, y):
    y = np.asarray(y, dtype=np.float64)
    _, dh = htilde2(y)
    return 2.0 * _u(x, y) * dh + np.cos(y) + 2.0 * y


def hess_xx_F(x, y):
    return 20.0 - 10.0 * np.sin(_u(x, y))


def hess_yx_F(x, y):
    _, dh = htilde2(y)
    return hess_xx_F(x, y) * dh


def hypergradient(x, y):
    hxx = hess_xx_F(x, y)
    if np.any(hxx <= 0):
        raise NumericError("lower-level Hessian lost positivity")
    return grad_y_G(x, y) - hess_yx_F(x, y) * grad_x_G(x, y) / hxx


# ------------------------------------------------------------------ #
#  Fixed point                                                         #
# ------------------------------------------------------------------ #

@lru_cache(maxsize=None)
def lower_root() -> float:
    """u* with 20u + 10 cos u = 0."""
    return brentq(lambda u: 20.0 * u + 10.0 * np.cos(u), -1.0, 0.0, xtol=ROOT_XTOL)


def lambda_map(y):
    h, _ = htilde2(y)
    return lower_root() - h


@lru_cache(maxsize=None)
def upper_root() -> float:
    """y* with g(lambda(y), y) = 0."""
    return brentq(lambda y: float(hypergradient(lambda_map(y), y)), -2.0, 2.0, xtol=ROOT_XTOL)


def _scalar(fn):
    return lambda x, y: float(np.asarray(fn(x, y)).reshape(-1)[0])


def make_sbo() -> ProblemSpec:
    y_star = upper_root()
    return ProblemSpec(
        name="sbo",
        d1=1,
        d2=1,
        f=grad_x_F,
        g=hypergradient,
        lambda_map=lambda_map,
        x_star=np.array([lambda_map(y_star)]),
        y_star=np.array([y_star]),
        consts=SBO_CONSTANTS,
        slow_noise=True,
        verify_box=3.0,
        derivative_checks=(
            DerivativeCheck("grad_x_F", _scalar(F), grad_x_F, wrt="x"),
            DerivativeCheck("grad_y_G", _scalar(G), grad_y_G, wrt="y", kinks=(-1.0, 0.0, 1.0)),
            DerivativeCheck("grad_x_G", _scalar(G), grad_x_G, wrt="x"),
            DerivativeCheck("hess_xx_F", _scalar(grad_x_F), hess_xx_F, wrt="x"),
            # mixed partial taken as d/dx of grad_y F; h2 is only C^1 in y
            DerivativeCheck("hess_yx_F", _scalar(grad_y_F), hess_yx_F, wrt="x"),
        ),
    )

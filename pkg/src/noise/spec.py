"""
Noise regimes.

state      E||xi||^2 = G11 ||x_hat||^(2 d11) + G12 ||y_hat||^(2 d12), d_ij in [0, 1)
quadratic  the same with every d_ij = 1
time       E||xi||^2 = G'11 (k+1+k0)^(-g1), E||psi||^2 = G'22 (k+1+k0)^(-g2)
none       no noise
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple, Union

import numpy as np

from src.utils.errors import ConfigurationError

Matrix2 = Tuple[Tuple[float, float], Tuple[float, float]]
MatrixLike = Union[float, Matrix2, np.ndarray]


class NoiseKind(str, Enum):
    STATE = "state"
    QUADRATIC = "quadratic"
    TIME = "time"
    NONE = "none"


def as_matrix(value: MatrixLike) -> Matrix2:
    """Broadcast a scalar or 2x2 nested sequence to a 2x2 tuple of floats."""
    arr = np.broadcast_to(np.asarray(value, dtype=np.float64), (2, 2))
    return ((float(arr[0, 0]), float(arr[0, 1])), (float(arr[1, 0]), float(arr[1, 1])))


_ZERO = ((0.0, 0.0), (0.0, 0.0))
_ONE = ((1.0, 1.0), (1.0, 1.0))


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind = NoiseKind.NONE
    gamma_mat: Matrix2 = _ZERO
    delta_mat: Matrix2 = _ZERO
    gamma_time: Tuple[float, float] = (0.0, 0.0)   # (G'11, G'22)
    gamma_exp: Tuple[float, float] = (0.0, 0.0)    # (gamma_1, gamma_2)

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        object.__setattr__(self, "gamma_mat", as_matrix(self.gamma_mat))
        object.__setattr__(self, "delta_mat", as_matrix(self.delta_mat))
        object.__setattr__(self, "gamma_time", tuple(float(v) for v in self.gamma_time))
        object.__setattr__(self, "gamma_exp", tuple(float(v) for v in self.gamma_exp))
        self._validate()

    def _validate(self) -> None:
        gammas = np.asarray(self.gamma_mat)
        deltas = np.asarray(self.delta_mat)
        if np.any(gammas < 0):
            raise ConfigurationError("Gamma_ij must be nonnegative")
        if self.kind is NoiseKind.STATE and np.any((deltas < 0) | (deltas >= 1)):
            raise ConfigurationError("state noise requires every delta_ij in [0, 1); use quadratic for delta = 1")
        if self.kind is NoiseKind.QUADRATIC and not np.all(deltas == 1.0):
            raise ConfigurationError("quadratic noise requires every delta_ij = 1")
        if self.kind is NoiseKind.TIME:
            g1, g2 = self.gamma_exp
            if min(self.gamma_time) < 0 or g1 < 0 or g2 < 0:
                raise ConfigurationError("time noise requires Gamma'_ii >= 0 and gamma_i >= 0")
            if not (-1.0 <= g1 - g2 < 0.5):
                raise ConfigurationError(f"time noise requires gamma1 - gamma2 in [-1, 1/2), got {g1 - g2}")

    # ------------------------------------------------------------------ #
    #  Constructors                                                        #
    # ------------------------------------------------------------------ #

    @classmethod
    def none(cls) -> "NoiseSpec":
        return cls()

    @classmethod
    def state(cls, delta: MatrixLike, gamma: MatrixLike) -> "NoiseSpec":
        return cls(kind=NoiseKind.STATE, gamma_mat=gamma, delta_mat=delta)

    @classmethod
    def quadratic(cls, gamma: MatrixLike) -> "NoiseSpec":
        return cls(kind=NoiseKind.QUADRATIC, gamma_mat=gamma, delta_mat=_ONE)

    @classmethod
    def time(cls, gamma1: float, gamma2: float, gamma_prime11: float, gamma_prime22: float) -> "NoiseSpec":
        return cls(kind=NoiseKind.TIME, gamma_time=(gamma_prime11, gamma_prime22), gamma_exp=(gamma1, gamma2))

    @classmethod
    def time_from_start(cls, gamma1: float, gamma2: float, start11: float, start22: float, k0: float) -> "NoiseSpec":
        """Time noise whose variance bounds at k = 0 are ``start11`` and ``start22``.

        Keeps large gammas from starting the run at variances near machine precision.
        """
        base = 1.0 + float(k0)
        return cls.time(gamma1, gamma2, start11 * base ** gamma1, start22 * base ** gamma2)

    # ------------------------------------------------------------------ #
    #  Serialisation                                                       #
    # ------------------------------------------------------------------ #

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "gamma_mat": [list(row) for row in self.gamma_mat],
            "delta_mat": [list(row) for row in self.delta_mat],
            "gamma_time": list(self.gamma_time),
            "gamma_exp": list(self.gamma_exp),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseSpec":
        """Build from a config mapping; scalar "gamma"/"delta" broadcast to every entry."""
        try:
            kind = NoiseKind(data.get("kind", "none"))
        except ValueError as exc:
            raise ConfigurationError(f"unknown noise kind {data.get('kind')!r}") from exc
        gamma = data.get("gamma_mat", data.get("gamma", 0.0))
        if kind is NoiseKind.STATE:
            return cls.state(data.get("delta_mat", data.get("delta", 0.0)), gamma)
        if kind is NoiseKind.QUADRATIC:
            return cls.quadratic(gamma)
        if kind is NoiseKind.TIME:
            g1, g2 = data.get("gamma_exp", (data.get("gamma1", 0.0), data.get("gamma2", 0.0)))
            p11, p22 = data.get("gamma_time", (data.get("gamma_prime", 0.0),) * 2)
            return cls.time(g1, g2, p11, p22)
        return cls.none()

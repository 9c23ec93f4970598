from dataclasses import dataclass

from src.utils.errors import ConfigurationError


@dataclass(frozen=True)
class AssumptionConstants:
    """Lipschitz and monotonicity constants of the operator pair."""
    L_lambda: float
    L_f: float
    mu_f: float
    L_g: float
    mu_g: float

    def __post_init__(self):
        if self.L_lambda < 0:
            raise ConfigurationError(f"L_lambda must be nonnegative, got {self.L_lambda}")
        for name in ("L_f", "mu_f", "L_g", "mu_g"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        if self.mu_f > self.L_f:
            raise ConfigurationError(f"mu_f = {self.mu_f} exceeds L_f = {self.L_f}")
        if self.mu_g > self.L_g:
            raise ConfigurationError(f"mu_g = {self.mu_g} exceeds L_g = {self.L_g}")

    @property
    def c(self) -> float:
        return 4.0 * self.L_g ** 2 / (self.mu_f * self.mu_g)

    def to_dict(self) -> dict:
        return {"L_lambda": self.L_lambda, "L_f": self.L_f, "mu_f": self.mu_f, "L_g": self.L_g, "mu_g": self.mu_g}

    @classmethod
    def from_dict(cls, data: dict) -> "AssumptionConstants":
        try:
            return cls(**{k: float(data[k]) for k in ("L_lambda", "L_f", "mu_f", "L_g", "mu_g")})
        except KeyError as exc:
            raise ConfigurationError(f"assumption constants miss {exc.args[0]!r}") from exc

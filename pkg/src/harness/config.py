"""
Experiment configuration.

A JSON document whose keys mirror the ``ExperimentConfig`` fields. The
schedule may be given explicitly or derived from a rate plan:

    {"alpha": 1.0, "beta": 4.0, "a": 0.667, "b": 1.0, "k0": 1e4}
    {"plan": "state", "alpha": 128, "beta": 4, "k0": 1e4}     a from the noise deltas
    {"plan": "time", "alpha": 128, "beta": 4}                 a from the gammas, strict k0
    {"plan": "quadratic", "omega": 64, "beta_cap": 1.0}       constant steps
"""
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from src.core.schedule import StepSchedule
from src.harness.checkpoints import DEFAULT_PER_DECADE, default_checkpoints, validate_checkpoints
from src.noise.rng import MAX_SEED
from src.noise.spec import NoiseKind, NoiseSpec
from src.planner.plans import theorem1_plan, theorem2_plan, theorem3_plan
from src.problems.registry import ProblemRegistry
from src.problems.spec import ProblemSpec
from src.utils.errors import ConfigurationError
from src.utils.log import get_logger

logger = get_logger("Config")


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    noise: NoiseSpec
    schedule: StepSchedule
    iterations: int
    replicates: int = 1
    master_seed: int = 0
    checkpoints: Tuple[int, ...] = ()
    init: Tuple[float, float] = (1.0, 1.0)
    problem_params: Dict[str, Any] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if not ProblemRegistry.exists(self.problem):
            raise ConfigurationError(f"unknown problem {self.problem!r}; known: {', '.join(ProblemRegistry.ids())}")
        if int(self.iterations) < 0:
            raise ConfigurationError(f"iterations must be nonnegative, got {self.iterations}")
        if int(self.replicates) < 1:
            raise ConfigurationError(f"replicates must be at least 1, got {self.replicates}")
        if not (0 <= int(self.master_seed) <= MAX_SEED):
            raise ConfigurationError(f"master_seed must be an unsigned 64-bit integer, got {self.master_seed}")
        object.__setattr__(self, "iterations", int(self.iterations))
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        object.__setattr__(self, "init", tuple(float(v) for v in self.init))
        ks = self.checkpoints or default_checkpoints(self.iterations)
        object.__setattr__(self, "checkpoints", tuple(validate_checkpoints(ks, self.iterations)))

    def build_problem(self) -> ProblemSpec:
        return ProblemRegistry.build(self.problem, **self.problem_params)

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        """Copy with command-line overrides applied; checkpoints follow a changed iteration count."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if "iterations" in overrides and "checkpoints" not in overrides:
            overrides["checkpoints"] = ()
        return replace(self, **overrides)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "problem": self.problem,
            "problem_params": dict(self.problem_params),
            "noise": self.noise.to_dict(),
            "schedule": self.schedule.to_dict(),
            "iterations": self.iterations,
            "replicates": self.replicates,
            "master_seed": self.master_seed,
            "checkpoints": list(self.checkpoints),
            "init": list(self.init),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        try:
            problem = data["problem"]
            iterations = int(data["iterations"])
        except KeyError as exc:
            raise ConfigurationError(f"config is missing field {exc.args[0]!r}") from exc
        params = dict(data.get("problem_params", {}))
        if isinstance(problem, dict):
            params.update({k: v for k, v in problem.items() if k != "id"})
            problem = problem.get("id")
        noise = NoiseSpec.from_dict(data.get("noise", {}))
        if "schedule" not in data:
            raise ConfigurationError("config is missing field 'schedule'")
        if not ProblemRegistry.exists(problem):
            raise ConfigurationError(f"unknown problem {problem!r}; known: {', '.join(ProblemRegistry.ids())}")
        spec = ProblemRegistry.build(problem, **params)
        schedule = resolve_schedule(data["schedule"], noise, spec)
        checkpoints = data.get("checkpoints")
        if checkpoints is None:
            checkpoints = default_checkpoints(iterations, int(data.get("per_decade", DEFAULT_PER_DECADE)))
        return cls(
            problem=problem,
            noise=noise,
            schedule=schedule,
            iterations=iterations,
            replicates=int(data.get("replicates", 1)),
            master_seed=int(data.get("master_seed", 0)),
            checkpoints=tuple(checkpoints),
            init=tuple(data.get("init", (1.0, 1.0))),
            problem_params=params,
            name=str(data.get("name", "")),
        )


def resolve_schedule(data: dict, noise: NoiseSpec, problem: ProblemSpec) -> StepSchedule:
    """Build the step schedule, running the matching rate plan when ``plan`` is given."""
    mode = data.get("plan")
    if mode is None:
        return StepSchedule.from_dict(data)
    try:
        if mode == "quadratic":
            if noise.kind is not NoiseKind.QUADRATIC:
                raise ConfigurationError("plan 'quadratic' needs quadratic noise")
            plan = theorem2_plan(problem.consts, noise.gamma_mat, float(data["omega"]), float(data.get("beta_cap", 1.0)))
        elif mode == "state":
            if noise.kind is not NoiseKind.STATE:
                raise ConfigurationError("plan 'state' needs state noise")
            plan = theorem1_plan(
                problem.consts, noise.delta_mat, float(data["alpha"]), float(data["beta"]), 1.0,
                gamma=noise.gamma_mat, k0=data.get("k0"), strict=data.get("k0") is None,
            )
        elif mode == "time":
            if noise.kind is not NoiseKind.TIME:
                raise ConfigurationError("plan 'time' needs time noise")
            plan = theorem3_plan(
                problem.consts, *noise.gamma_exp, float(data["alpha"]), float(data["beta"]), 1.0,
                gamma_prime=noise.gamma_time, k0=data.get("k0"), strict=data.get("k0") is None,
            )
        else:
            raise ConfigurationError(f"unknown schedule plan {mode!r}")
    except KeyError as exc:
        raise ConfigurationError(f"schedule plan {mode!r} is missing field {exc.args[0]!r}") from exc
    for violation in plan.violations:
        logger.warning(f"schedule plan {mode}: {violation}")
    logger.info(f"schedule from {mode} plan: {plan.schedule}")
    return plan.schedule


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    config = ExperimentConfig.from_dict(data)
    if not config.name:
        config = replace(config, name=path.stem)
    return config

"""
Problem registry.

Maps problem ids to factories so configs and the command line can name a
problem. The built-in instances are registered lazily on first access.
"""
from dataclasses import dataclass
from typing import Callable, Optional

from src.problems.sbo import make_sbo
from src.problems.sgd_pr import make_sgd_pr
from src.problems.spec import ProblemSpec
from src.utils.errors import ConfigurationError
from src.utils.log import get_logger

logger = get_logger("ProblemRegistry")


@dataclass
class ProblemDefinition:
    """A named problem factory; ``params`` are the keyword arguments it accepts."""
    id: str
    factory: Callable[..., ProblemSpec]
    description: str
    params: tuple = ()

    def build(self, **params) -> ProblemSpec:
        unknown = set(params) - set(self.params)
        if unknown:
            raise ConfigurationError(f"problem {self.id!r} does not accept parameters {sorted(unknown)}")
        return self.factory(**params)


class ProblemRegistry:
    """
    Registry of benchmark problems.

    Provides lookup by id plus a small management API for plug-in problems.
    """

    # Internal storage - use public API to modify
    _problems: dict[str, ProblemDefinition] = {}
    _initialized: bool = False

    @classmethod
    def initialize_defaults(cls):
        """Register the built-in problems."""
        if not cls._initialized:
            cls._problems = {
                "sgd-pr": ProblemDefinition(
                    id="sgd-pr",
                    factory=make_sgd_pr,
                    description="SGD with Polyak-Ruppert averaging, F_i(x) = x^2 + sin x",
                    params=("dim",),
                ),
                "sbo": ProblemDefinition(
                    id="sbo",
                    factory=make_sbo,
                    description="scalar stochastic bilevel instance with smoothed quadratic coupling",
                ),
            }
            cls._initialized = True

    # ============================================================
    # PUBLIC API - Management
    # ============================================================

    @classmethod
    def register(cls, definition: ProblemDefinition) -> None:
        """
        Add a problem definition.

        Raises:
            ConfigurationError: If the id is already registered
        """
        cls.initialize_defaults()
        if definition.id in cls._problems:
            raise ConfigurationError(f"problem {definition.id!r} already registered")
        cls._problems[definition.id] = definition
        logger.debug(f"Registered problem: {definition.id}")

    @classmethod
    def unregister(cls, problem_id: str) -> bool:
        cls.initialize_defaults()
        removed = cls._problems.pop(problem_id, None)
        return removed is not None

    @classmethod
    def reset_to_defaults(cls) -> None:
        cls._problems = {}
        cls._initialized = False
        cls.initialize_defaults()

    # ============================================================
    # PUBLIC API - Queries
    # ============================================================

    @classmethod
    def get(cls, problem_id: str) -> Optional[ProblemDefinition]:
        cls.initialize_defaults()
        return cls._problems.get(problem_id)

    @classmethod
    def ids(cls) -> list[str]:
        cls.initialize_defaults()
        return sorted(cls._problems)

    @classmethod
    def exists(cls, problem_id: str) -> bool:
        cls.initialize_defaults()
        return problem_id in cls._problems

    @classmethod
    def build(cls, problem_id: str, **params) -> ProblemSpec:
        """
        Construct the problem registered under ``problem_id``.

        Example:
            >>> ProblemRegistry.build("sgd-pr", dim=5).d1
            5
        """
        definition = cls.get(problem_id)
        if definition is None:
            raise ConfigurationError(f"unknown problem {problem_id!r}; known: {', '.join(cls.ids())}")
        return definition.build(**params)

"""
Exception hierarchy for the laboratory.

Every error raised on purpose by the library derives from ``LabError`` so the
command-line front end can map it to a stable exit code.
"""
from typing import Optional, Sequence


class LabError(Exception):
    """Base class for all laboratory errors."""

    exit_code: int = 2


class ConfigurationError(LabError, ValueError):
    """Invalid schedule, noise spec, experiment config or incomplete problem."""

    exit_code = 1


class DomainError(LabError, ValueError):
    """Argument outside the mathematical domain of a formula."""

    exit_code = 1


class DivergenceError(LabError):
    """An iterate left the finite region guarded by the divergence threshold."""

    def __init__(self, iteration: int, message: Optional[str] = None):
        self.iteration = iteration
        super().__init__(message or f"iterate diverged at iteration {iteration}")


class NumericError(LabError):
    """A numerical procedure failed (non-convergence, lost positivity)."""


class InfeasibleError(LabError):
    """A rate plan violates one or more theorem preconditions."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("infeasible plan: " + "; ".join(self.violations))


class EnsembleError(LabError):
    """No replicate of an ensemble survived."""


class InsufficientDataError(LabError):
    """A fit window holds fewer than two usable checkpoints."""


class SchemaError(LabError):
    """A persisted summary is missing fields or malformed."""

    exit_code = 1


class SchemaVersionError(SchemaError):
    """A persisted summary was written by another schema version."""


class VerificationError(LabError):
    """Assumption or gradient checks failed; ``witnesses`` names the offenders."""

    def __init__(self, message: str, witnesses: Sequence = ()):
        self.witnesses = list(witnesses)
        super().__init__(message)


class PreconditionError(LabError):
    """A lemma precondition does not hold for the requested schedule."""


class StorageError(LabError):
    """A summary file is missing or unreadable."""

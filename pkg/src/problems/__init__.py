from src.problems.spec import DerivativeCheck, ProblemSpec
from src.problems.sgd_pr import make_sgd_pr
from src.problems.sbo import htilde2, make_sbo
from src.problems.registry import ProblemDefinition, ProblemRegistry
from src.problems.verification import VerificationReport, verify_constants

__all__ = [
    "DerivativeCheck", "ProblemSpec", "make_sgd_pr", "make_sbo", "htilde2",
    "ProblemDefinition", "ProblemRegistry", "VerificationReport", "verify_constants",
]

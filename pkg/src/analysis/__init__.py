from src.analysis.fitting import FitResult, fit_loglog, fit_semilog
from src.analysis.grad_check import GradCheckReport, grad_check
from src.analysis.lemma_check import BoundReport, check_lemma3_bound

__all__ = [
    "FitResult", "fit_loglog", "fit_semilog", "GradCheckReport", "grad_check", "BoundReport", "check_lemma3_bound",
]

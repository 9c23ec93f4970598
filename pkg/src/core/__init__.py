from src.core.schedule import StepSchedule, step_sizes
from src.core.iteration import IterateState, Residuals, step, residuals, DIVERGENCE_THRESHOLD
from src.core.lyapunov import LyapunovValue, coupling_constant, lyapunov

__all__ = [
    "StepSchedule", "step_sizes",
    "IterateState", "Residuals", "step", "residuals", "DIVERGENCE_THRESHOLD",
    "LyapunovValue", "coupling_constant", "lyapunov",
]

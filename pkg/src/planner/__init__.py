from src.planner.constants import AssumptionConstants
from src.planner.envelope import RatePair, m_envelope, solve_rate_state, rate_state_closed_form, solve_rate_time
from src.planner.plans import (
    RatePlan, lemma3_constant, ratio_threshold, beta_threshold, minimal_k0,
    theorem1_plan, theorem2_plan, theorem3_plan, contraction_factor,
)

__all__ = [
    "AssumptionConstants", "RatePair", "m_envelope", "solve_rate_state", "rate_state_closed_form",
    "solve_rate_time", "RatePlan", "lemma3_constant", "ratio_threshold", "beta_threshold", "minimal_k0",
    "theorem1_plan", "theorem2_plan", "theorem3_plan", "contraction_factor",
]

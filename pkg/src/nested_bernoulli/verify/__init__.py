"""Independent oracles and certification checks."""

from .harness import TARGETS, Check, run_target
from .lemmas import (
    LemmaReport,
    central_binomial_bounds_check,
    certify_lemmas,
    chen_bound_check,
    log_convexity_second_derivative,
    robbins_check,
    series_inequality_check,
)
from .oracles import EmpiricalEstimate, exact_pmf, simulate_stage1
from .rates import RateEstimate, fit_rate, geometric_grid

__all__ = [
    "TARGETS",
    "Check",
    "run_target",
    "LemmaReport",
    "central_binomial_bounds_check",
    "certify_lemmas",
    "chen_bound_check",
    "log_convexity_second_derivative",
    "robbins_check",
    "series_inequality_check",
    "EmpiricalEstimate",
    "exact_pmf",
    "simulate_stage1",
    "RateEstimate",
    "fit_rate",
    "geometric_grid",
]

"""Nested Bernoulli trials: the map P_n, its iterates p_{k,n} and fixed point p_n."""

from .dynamics import (
    IterationTrace,
    Probability,
    RateTheory,
    iterate,
    pn_map,
    rate_recursion_check,
    theory_rates,
)
from .fixedpoint import (
    BracketingError,
    FixedPointResult,
    NonConvergenceError,
    derivative_at_fixed_point,
    iterate_to_fixed_point,
    rn_lower_bound,
    solve,
)
from .specfun import DomainError

__version__ = "0.1.0"

__all__ = [
    "IterationTrace",
    "Probability",
    "RateTheory",
    "iterate",
    "pn_map",
    "rate_recursion_check",
    "theory_rates",
    "BracketingError",
    "FixedPointResult",
    "NonConvergenceError",
    "derivative_at_fixed_point",
    "iterate_to_fixed_point",
    "rn_lower_bound",
    "solve",
    "DomainError",
]

"""Grid certification of the convexity and attraction hypotheses for P_n.

Nothing here is a proof: each check evaluates an inequality at finitely
many points, with exact integer arithmetic wherever factorials or central
binomial coefficients appear.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from ..dynamics import as_probability, pn_map
from ..fixedpoint import rn_lower_bound, solve
from ..specfun import (
    DomainError,
    MAX_POLYGAMMA_ORDER,
    chen_polygamma_upper,
    digamma,
    digamma_bounds,
    polygamma,
    robbins_bounds,
)

__all__ = [
    "GRID_POINTS",
    "LemmaReport",
    "interior_grid",
    "log_convexity_second_derivative",
    "certify_lemmas",
    "central_binomial_bounds_check",
    "series_inequality_check",
    "chen_bound_check",
    "robbins_check",
    "digamma_bounds_check",
]

GRID_POINTS = 999


def interior_grid(points=GRID_POINTS):
    """j/(points+1) for j = 1..points."""
    return [j / (points + 1) for j in range(1, points + 1)]


def log_convexity_second_derivative(n, p):
    """(1/n) d^2/dp^2 ln P_n(p) = 1/(p(1-p)) - n[psi'(1+np) + psi'(1+n(1-p))]."""
    p = as_probability(p).value
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    q = 1.0 - p
    return 1.0 / (p * q) - n * (polygamma(1, 1.0 + n * p) + polygamma(1, 1.0 + n * q))


@dataclass(frozen=True)
class LemmaReport:
    n: int
    convexity_grid_min: float
    c_n: float
    p_n_of_c_n: float
    abs_derivative_at_fp: float
    rn_grid_min: float
    all_pass: bool
    p_n: float
    derivative_at_fp: float
    c_n_exact: float | None  # 2^-n C(n, n/2) for even n


def _central_midpoint(n):
    return float(Fraction(math.comb(n, n // 2), 2**n))


def certify_lemmas(n, points=GRID_POINTS):
    """Evaluate the fixed-point lemma's hypotheses for P_n on a grid."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    grid = interior_grid(points)
    convexity_min = min(log_convexity_second_derivative(n, p) for p in grid)
    rn_min = min(rn_lower_bound(n, p) for p in grid)
    c_n = pn_map(n, 0.5).value
    p_c = pn_map(n, c_n).value
    fp = solve(n)
    abs_deriv = abs(fp.derivative_at_fp)
    all_pass = (
        convexity_min > 0.0
        and abs_deriv < 1.0
        and (n <= 2 or p_c < 0.5)
        and rn_min > 0.0
    )
    return LemmaReport(
        n=n,
        convexity_grid_min=convexity_min,
        c_n=c_n,
        p_n_of_c_n=p_c,
        abs_derivative_at_fp=abs_deriv,
        rn_grid_min=rn_min,
        all_pass=all_pass,
        p_n=fp.p_n.value,
        derivative_at_fp=fp.derivative_at_fp,
        c_n_exact=_central_midpoint(n) if n % 2 == 0 else None,
    )


def central_binomial_bounds_check(n):
    """2^n / sqrt(pi(n+1)/2) <= C(n, n/2) <= 2^n / sqrt(pi n/2), in logs."""
    if isinstance(n, bool) or int(n) != n or n < 2 or n % 2:
        raise DomainError(f"n must be an even integer >= 2, got {n!r}")
    log_c = math.log(math.comb(n, n // 2))
    log_2n = n * math.log(2.0)
    lower = log_2n - 0.5 * math.log(math.pi * (n + 1) / 2.0)
    upper = log_2n - 0.5 * math.log(math.pi * n / 2.0)
    return lower <= log_c <= upper


def _check_i_max(i_max):
    top = (MAX_POLYGAMMA_ORDER - 1) // 2
    if isinstance(i_max, bool) or int(i_max) != i_max or not 0 <= i_max <= top:
        raise DomainError(f"i_max must be an integer in 0..{top}, got {i_max!r}")
    return int(i_max)


def series_inequality_check(n, i_max):
    """n^(2i+1)/(2i)! * psi^(2i+1)(n/2+1) < 2^(2i+1) for i = 0..i_max, in logs."""
    for i in range(_check_i_max(i_max) + 1):
        m = 2 * i + 1
        lhs = m * math.log(n) - math.log(math.factorial(2 * i)) + math.log(polygamma(m, n / 2.0 + 1.0))
        if not lhs < m * math.log(2.0):
            return False
    return True


def chen_bound_check(n, i_max):
    """psi^(2i+1)(n/2+1) < chen_polygamma_upper(i, n) for i = 0..i_max."""
    return all(
        polygamma(2 * i + 1, n / 2.0 + 1.0) < chen_polygamma_upper(i, n)
        for i in range(_check_i_max(i_max) + 1)
    )


def robbins_check(n):
    """Robbins sandwich against ln n! from the exact integer factorial."""
    return robbins_bounds(n).contains(math.log(math.factorial(n)))


def digamma_bounds_check(x):
    return digamma_bounds(x).contains(digamma(x))

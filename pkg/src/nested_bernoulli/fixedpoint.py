"""The interior fixed point p_n = P_n(p_n) and the derivative there.

The solver brackets the sign change of g(p) = P_n(p) - p and bisects; it does
not rely on P_n being a contraction.  Plain iteration of P_n is available
separately to show that every start in (0, 1) is attracted to the same point.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import MAX_STEPS, Probability, as_probability, iterate, pn_map
from .specfun import digamma

__all__ = [
    "SCAN_LO",
    "SCAN_HI",
    "FixedPointResult",
    "BracketingError",
    "NonConvergenceError",
    "solve",
    "iterate_to_fixed_point",
    "derivative_at_fixed_point",
    "rn_lower_bound",
    "scan_grid",
    "count_sign_changes",
]

SCAN_LO = 1e-9
SCAN_HI = 1.0 - 1e-9
DEFAULT_TOL = 1e-12
MAX_BISECTIONS = 200


class BracketingError(RuntimeError):
    """No sign change of P_n(p) - p was found on the scan domain."""


class NonConvergenceError(RuntimeError):
    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class FixedPointResult:
    n: int
    p_n: Probability
    residual: float
    bracket: tuple
    iterations: int
    derivative_at_fp: float


def _g(n, p):
    return pn_map(n, p).value - p


def scan_grid(num_geometric=90, num_uniform=100):
    """Geometric points on [SCAN_LO, 1/2] followed by uniform ones on (1/2, SCAN_HI]."""
    geo = np.geomspace(SCAN_LO, 0.5, num_geometric)
    uni = np.linspace(0.5, SCAN_HI, num_uniform + 1)[1:]
    return np.concatenate([geo, uni])


def count_sign_changes(n, num=10_000):
    """Number of strict sign changes of P_n(p) - p on a uniform grid over the scan domain."""
    ps = np.linspace(SCAN_LO, SCAN_HI, num)
    signs = np.sign([_g(n, float(p)) for p in ps])
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _bracket(n):
    grid = scan_grid()
    g_prev = _g(n, float(grid[0]))
    if g_prev <= 0.0:
        raise BracketingError(f"P_{n}(p) - p is not positive at p={grid[0]}")
    for lo, hi in zip(grid[:-1], grid[1:]):
        g_hi = _g(n, float(hi))
        if g_hi == 0.0:
            return float(hi), float(hi)
        if g_hi < 0.0:
            return float(lo), float(hi)
    raise BracketingError(f"no sign change of P_{n}(p) - p on [{SCAN_LO}, {SCAN_HI}]")


def solve(n, tol=DEFAULT_TOL):
    """Locate p_n by bracketed bisection of P_n(p) - p.

    Raises BracketingError if the scan finds no sign change or if the final
    residual misses ``tol``; either one indicates a precision problem.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not 0.0 < tol <= 1e-6:
        raise ValueError(f"tol must lie in (0, 1e-6], got {tol!r}")
    n = int(n)
    lo, hi = _bracket(n)
    bracket = (lo, hi)
    steps = 0
    best = lo
    if lo != hi:
        g_lo, g_hi = _g(n, lo), _g(n, hi)
        best = lo if abs(g_lo) < abs(g_hi) else hi
        while steps < MAX_BISECTIONS:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            g_mid = _g(n, mid)
            steps += 1
            if g_mid == 0.0:
                lo = hi = best = mid
                break
            if g_mid > 0.0:
                lo, g_lo = mid, g_mid
            else:
                hi, g_hi = mid, g_mid
            best = lo if abs(g_lo) < abs(g_hi) else hi
    residual = abs(_g(n, best))
    if not residual < tol:
        raise BracketingError(
            f"bisection for n={n} stalled at residual {residual:.3e} >= tol {tol:.3e}"
        )
    p_n = Probability.from_value(best)
    return FixedPointResult(
        n, p_n, residual, bracket, steps, derivative_at_fixed_point(n, p_n)
    )


def iterate_to_fixed_point(n, p0, tol=DEFAULT_TOL, max_iter=MAX_STEPS):
    """Apply P_n from p0 until successive iterates differ by less than ``tol``.

    Starts within about 1e-16 of 0 or 1 are mapped to exactly 1 in double
    precision and stay at the boundary fixed point; they raise
    NonConvergenceError like any other failure to settle.
    """
    p = as_probability(p0)
    if not 0.0 < p.value < 1.0:
        raise ValueError(f"p0 must lie in (0, 1), got {p.value!r}")
    if max_iter > MAX_STEPS:
        raise ValueError(f"max_iter={max_iter} exceeds the cap of {MAX_STEPS}")
    prev = p
    for k in range(1, max_iter + 1):
        cur = pn_map(n, prev)
        if abs(cur.value - prev.value) < tol:
            lo, hi = sorted((prev.value, cur.value))
            residual = abs(pn_map(n, cur).value - cur.value)
            return FixedPointResult(
                n, cur, residual, (lo, hi), k, derivative_at_fixed_point(n, cur)
            )
        prev = cur
    trace = iterate(n, p, min(max_iter, 1000))
    raise NonConvergenceError(
        f"no convergence to tol {tol:.1e} after {max_iter} iterations for n={n}", trace
    )


def derivative_at_fixed_point(n, p_n):
    """P_n'(p_n) = n p_n [psi(1 + n(1-p_n)) - psi(1 + n p_n) - ln((1-p_n)/p_n)].

    The prefactor p_n stands in for P_n(p_n), so the input must be a fixed
    point to within 1e-10.
    """
    p = as_probability(p_n).value
    if not 0.0 < p < 1.0:
        raise ValueError(f"p_n must lie in (0, 1), got {p!r}")
    if abs(_g(n, p)) >= 1e-10:
        raise ValueError(f"p={p!r} is not a fixed point of P_{n} to within 1e-10")
    q = 1.0 - p
    return n * p * (digamma(1.0 + n * q) - digamma(1.0 + n * p) - (math.log(q) - math.log(p)))


def rn_lower_bound(n, p):
    """r_n(p) = (1/2)(1+n)/(1+n(1-p)) + (1/6)/(1+np)^2 - (2/3)/(1+np).

    -1 + r_n(p_n) bounds P_n'(p_n) from below.
    """
    p = as_probability(p).value
    a = 1.0 + n * p
    return 0.5 * (1.0 + n) / (1.0 + n * (1.0 - p)) + 1.0 / (6.0 * a * a) - 2.0 / (3.0 * a)

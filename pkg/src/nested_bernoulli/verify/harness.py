"""Named pass/fail checks grouped by the result they support.

Each ``check_*`` function returns ``(results, checks)``: result records
(dataclasses) with the computed quantities and a list of ``Check`` rows.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ..dynamics import log_pn, pn_map, rate_recursion_check, theory_rates
from ..fixedpoint import (
    count_sign_changes,
    derivative_at_fixed_point,
    iterate_to_fixed_point,
    rn_lower_bound,
    solve,
)
from ..specfun import digamma, polygamma
from .lemmas import (
    central_binomial_bounds_check,
    certify_lemmas,
    chen_bound_check,
    digamma_bounds_check,
    log_convexity_second_derivative,
    robbins_check,
    series_inequality_check,
)
from .oracles import exact_pmf
from .rates import fit_rate, fixed_point_samples, geometric_grid, stage_samples

__all__ = [
    "Check",
    "RATE_GRID",
    "check_theorem1",
    "check_theorem2",
    "check_lemmas",
    "check_bounds",
    "check_oracles",
    "run_target",
    "TARGETS",
]

RATE_GRID = (10**4, 10**7, 20)
THEOREM2_NS = (1, 2, 3, 10, 100, 10**3, 10**4, 10**5)
BASIN_STARTS = (0.01, 0.15, 0.5, 0.85, 0.99)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    passed: bool


def _upper(name, value, threshold):
    """Passes when value < threshold."""
    return Check(name, float(value), float(threshold), bool(value < threshold))


def _flag(name, ok):
    return Check(name, 1.0 if ok else 0.0, 1.0, bool(ok))


def check_theorem1(k_max=5, p=0.3, ns=None, slope_tol=0.01, intercept_tol=0.05):
    ns = list(ns) if ns is not None else geometric_grid(*RATE_GRID)
    results, checks = [], []
    for k in range(1, k_max + 1):
        theory = theory_rates(p, k)
        est = fit_rate(stage_samples(ns, p, k), k=k)
        results.append(est)
        checks.append(_upper(f"theorem1.k{k}.slope", abs(est.slope + float(theory.beta_k)), slope_tol))
        if k <= 2:
            err = abs(est.intercept - math.log(theory.alpha_k))
            checks.append(_upper(f"theorem1.k{k}.intercept", err, intercept_tol))
    js = [None, 1, 1]
    while len(js) <= 30:
        js.append(js[-1] + 2 * js[-2])
    ok = all(
        2**k * theory_rates(p, k).beta_k == js[k] == theory_rates(p, k).jacobsthal_k
        for k in range(1, 31)
    )
    checks.append(_flag("theorem1.jacobsthal_k1_30", ok))
    checks.append(_flag("theorem1.rate_recursion_k30", rate_recursion_check(30, p)))
    return results, checks


def check_theorem2(ns=THEOREM2_NS, starts=BASIN_STARTS, fit_ns=None, tol=1e-12):
    fit_ns = list(fit_ns) if fit_ns is not None else geometric_grid(*RATE_GRID)
    results, checks = [], []
    for n in ns:
        fp = solve(n, tol)
        results.append(fp)
        checks.append(_upper(f"theorem2.n{n}.residual", fp.residual, tol))
        checks.append(_upper(f"theorem2.n{n}.abs_derivative", abs(fp.derivative_at_fp), 1.0))
        worst = max(abs(iterate_to_fixed_point(n, p0, tol).p_n.value - fp.p_n.value) for p0 in starts)
        checks.append(_upper(f"theorem2.n{n}.basin", worst, 1e-9))
        if n == 2:
            checks.append(_upper("theorem2.p2_is_half", abs(fp.p_n.value - 0.5), 1e-12))
    est = fit_rate(fixed_point_samples(fit_ns, tol), k=0)
    results.append(est)
    checks.append(_upper("theorem2.slope", abs(est.slope + 1.0 / 3.0), 0.01))
    return results, checks


def check_lemmas(n_max=50, c_max=1000, sign_scan=True):
    results, checks = [], []
    for n in range(1, n_max + 1):
        rep = certify_lemmas(n)
        results.append(rep)
        checks.append(_flag(f"lemmas.n{n}.all_pass", rep.all_pass))
        if rep.c_n_exact is not None:
            checks.append(_upper(f"lemmas.n{n}.c_n_exact", abs(rep.c_n / rep.c_n_exact - 1.0), 1e-12))
        if n >= 3:
            lower = -1.0 + rn_lower_bound(n, rep.p_n)
            checks.append(_flag(f"lemmas.n{n}.derivative_chain", rep.derivative_at_fp >= lower))
        if sign_scan:
            checks.append(_flag(f"lemmas.n{n}.unique_root", count_sign_changes(n) == 1))
    if n_max >= 1:
        checks.append(_upper("lemmas.c1_is_2_over_pi", abs(results[0].c_n - 2.0 / math.pi), 1e-12))
    if n_max >= 2:
        checks.append(_upper("lemmas.c2_is_half", abs(results[1].c_n - 0.5), 1e-12))
    worst = max(pn_map(n, pn_map(n, 0.5)).value for n in range(3, c_max + 1))
    checks.append(_upper(f"lemmas.P_n(c_n)_n3_{c_max}", worst, 0.5))
    return results, checks


def check_bounds(robbins_max=170, central_max=1000, series_n_max=100, i_max=5):
    checks = [
        _flag(f"bounds.robbins_n1_{robbins_max}", all(robbins_check(n) for n in range(1, robbins_max + 1))),
        _flag(
            f"bounds.central_binomial_even_n_le_{central_max}",
            all(central_binomial_bounds_check(n) for n in range(2, central_max + 1, 2)),
        ),
        _flag(
            f"bounds.chen_i_le_{i_max}_n_le_{series_n_max}",
            all(chen_bound_check(n, i_max) for n in range(1, series_n_max + 1)),
        ),
        _flag(
            f"bounds.series_i_le_{i_max}_n_le_{series_n_max}",
            all(series_inequality_check(n, i_max) for n in range(1, series_n_max + 1)),
        ),
        _flag("bounds.digamma_1_5_50", all(digamma_bounds_check(x) for x in (1, 5, 50))),
    ]
    return [], checks


def _central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def check_oracles(n_max=60, count=200, seed=20240101):
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(count):
        n = rng.randint(1, n_max)
        m = rng.randint(0, n)
        p = Fraction(m, n)
        exact = exact_pmf(n, m, p.numerator, p.denominator)
        worst = max(worst, abs(pn_map(n, float(p)).value / float(exact) - 1.0))
    checks = [_upper(f"oracles.exact_pmf_n_le_{n_max}", worst, 1e-11)]

    fd = max(
        abs(_central_diff(digamma, x, 1e-5) / polygamma(1, x) - 1.0) for x in (1.0, 2.0, 10.0, 100.0)
    )
    checks.append(_upper("oracles.digamma_fd", fd, 1e-5))

    p10 = solve(10).p_n
    fd = _central_diff(lambda x: pn_map(10, x).value, p10.value, 1e-6)
    checks.append(_upper("oracles.derivative_fd_n10", abs(derivative_at_fixed_point(10, p10) - fd), 1e-5))

    h = 1e-4
    second = (log_pn(10, 0.3 + h) - 2.0 * log_pn(10, 0.3) + log_pn(10, 0.3 - h)) / (h * h) / 10
    err = abs(second / log_convexity_second_derivative(10, 0.3) - 1.0)
    checks.append(_upper("oracles.log_convexity_fd", err, 1e-4))
    return [], checks


TARGETS = {
    "theorem1": check_theorem1,
    "theorem2": check_theorem2,
    "lemmas": check_lemmas,
    "bounds": check_bounds,
    "oracles": check_oracles,
}


def run_target(name, **kwargs):
    return TARGETS[name](**kwargs)

import math

import pytest

from nested_bernoulli.dynamics import iterate, pn_map
from nested_bernoulli.fixedpoint import (
    BracketingError,
    NonConvergenceError,
    count_sign_changes,
    derivative_at_fixed_point,
    iterate_to_fixed_point,
    rn_lower_bound,
    solve,
)

# independently located with mpmath.findroot / mpmath.diff on the Gamma form at 30 digits
P10 = 0.27365676501917249
DP10 = -0.28586662490562724
P1 = 0.65318996528848333
P3 = 0.42795241420075833


@pytest.mark.parametrize("n, expected", [(1, P1), (3, P3), (10, P10)])
def test_solve_matches_high_precision_roots(n, expected):
    r = solve(n, 1e-12)
    assert abs(r.p_n.value - expected) < 1e-14
    assert r.residual < 1e-12
    lo, hi = r.bracket
    assert lo <= r.p_n.value <= hi


def test_solve_n2_is_half():
    assert abs(solve(2, 1e-12).p_n.value - 0.5) < 1e-12


def test_bracket_straddles_sign_change():
    for n in (1, 5, 77, 10**5):
        r = solve(n)
        lo, hi = r.bracket
        assert pn_map(n, lo).value - lo > 0 > pn_map(n, hi).value - hi


def test_solve_large_n_asymptotic():
    r = solve(10**6, 1e-12)
    approx = (2 * math.pi * 10**6) ** (-1 / 3)
    assert abs(r.p_n.value / approx - 1.0) < 0.01


@pytest.mark.parametrize("tol", [0.0, -1e-9, 1e-5])
def test_solve_tol_precondition(tol):
    with pytest.raises(ValueError):
        solve(10, tol)


def test_iteration_agrees_with_bisection():
    a = iterate_to_fixed_point(10, 0.15, 1e-12, 10**5)
    b = iterate_to_fixed_point(10, 0.85, 1e-12, 10**5)
    s = solve(10, 1e-12)
    assert abs(a.p_n.value - s.p_n.value) < 1e-9
    assert abs(b.p_n.value - s.p_n.value) < 1e-9
    assert abs(iterate_to_fixed_point(2, 0.3).p_n.value - 0.5) < 1e-9


@pytest.mark.parametrize("n", [1, 2, 3, 10, 100])
@pytest.mark.parametrize("p0", [0.01, 0.15, 0.5, 0.85, 0.99])
def test_basin_of_attraction(n, p0):
    assert abs(iterate_to_fixed_point(n, p0).p_n.value - solve(n).p_n.value) < 1e-9


def test_non_convergence_carries_trace():
    with pytest.raises(NonConvergenceError) as info:
        iterate_to_fixed_point(10, 0.15, 1e-12, 3)
    assert info.value.trace.n == 10
    assert len(info.value.trace) == 4


def test_derivative_examples():
    assert abs(derivative_at_fixed_point(2, 0.5)) < 1e-12
    d = derivative_at_fixed_point(10, solve(10).p_n)
    assert -1.0 < d < 0.0
    assert abs(d - DP10) < 1e-12


def test_derivative_matches_finite_difference():
    p = solve(10).p_n.value
    h = 1e-6
    fd = (pn_map(10, p + h).value - pn_map(10, p - h).value) / (2 * h)
    assert abs(derivative_at_fixed_point(10, p) - fd) < 1e-5


def test_derivative_requires_fixed_point():
    with pytest.raises(ValueError):
        derivative_at_fixed_point(10, 0.3)


def test_contraction_and_position():
    for n in range(1, 101):
        r = solve(n)
        assert abs(r.derivative_at_fp) < 1.0
        if n > 2:
            assert r.p_n.value < 0.5
            assert r.derivative_at_fp < 0.0
            assert r.derivative_at_fp >= -1.0 + rn_lower_bound(n, r.p_n)
    # n = 1 sits above 1/2
    assert solve(1).p_n.value > 0.5


def test_rn_examples():
    assert math.isclose(rn_lower_bound(1, 0.5), 8 / 27, rel_tol=1e-14)
    for n in range(3, 101):
        assert all(rn_lower_bound(n, j / 1000) > 0 for j in range(1, 1000))
    n = 20
    limit = (1 + n) / 2 + (1 / 6) / (1 + n) ** 2 - (2 / 3) / (1 + n)
    assert math.isclose(rn_lower_bound(n, 1 - 1e-12), limit, rel_tol=1e-9)


@pytest.mark.parametrize("n", range(1, 51))
def test_unique_sign_change(n):
    assert count_sign_changes(n) == 1


def test_bracketing_error_type():
    assert issubclass(BracketingError, RuntimeError)


def test_iterate_trace_converges_like_solver():
    t = iterate(100, 0.99, 60)
    assert abs(t.last.value - solve(100).p_n.value) < 1e-12

"""Log-log least squares for decay rates of p_{k,n} and p_n in n."""

import math
from dataclasses import dataclass

import numpy as np

from ..dynamics import as_probability, iterate
from ..fixedpoint import solve
from ..specfun import DomainError

__all__ = [
    "RateEstimate",
    "fit_rate",
    "geometric_grid",
    "stage_samples",
    "fixed_point_samples",
]


@dataclass(frozen=True)
class RateEstimate:
    """Fit of ln p = intercept + slope * ln(2 pi n).

    slope estimates -beta_k and intercept estimates ln alpha_k.  k = 0 tags
    the fixed-point sequence p_n.
    """

    k: int
    slope: float
    intercept: float
    r_squared: float
    n_range: tuple
    sample_count: int


def geometric_grid(lo, hi, per_decade):
    """Integers round(10^(log10(lo) + j/per_decade)) up to hi, duplicates dropped."""
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got {lo}, {hi}")
    if per_decade < 1:
        raise ValueError(f"per_decade must be positive, got {per_decade}")
    start = math.log10(lo)
    steps = int(math.floor((math.log10(hi) - start) * per_decade + 1e-9))
    out = []
    for j in range(steps + 1):
        v = int(round(10 ** (start + j / per_decade)))
        if not out or v != out[-1]:
            out.append(v)
    return out


def fit_rate(samples, k=0):
    """Ordinary least squares of ln p against ln(2 pi n)."""
    samples = list(samples)
    if len(samples) < 3:
        raise DomainError(f"need at least 3 samples, got {len(samples)}")
    ns = np.array([float(n) for n, _ in samples])
    if len(set(ns)) != len(ns):
        raise DomainError("n values must be distinct")
    logs = []
    for _, p in samples:
        p = as_probability(p)
        if not p.value > 0.0:
            raise DomainError("all probabilities must be positive")
        logs.append(p.log_value)
    x = np.log(2.0 * np.pi * ns)
    y = np.array(logs)
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    intercept = float(y.mean() - slope * x.mean())
    ss_res = float(np.sum((y - intercept - slope * x) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return RateEstimate(
        k, slope, intercept, r2, (int(ns.min()), int(ns.max())), len(samples)
    )


def stage_samples(ns, p0, k):
    """[(n, p_{k,n})] over the grid ns."""
    return [(n, iterate(n, p0, k).last) for n in ns]


def fixed_point_samples(ns, tol=1e-12):
    return [(n, solve(n, tol).p_n) for n in ns]

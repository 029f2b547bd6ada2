"""The map P_n(p) = C(n, np) p^np (1-p)^(n(1-p)) and its iterates p_{k,n}.

P_n(p) is the probability that n Bernoulli(p) trials produce exactly their
expected number np of successes, with the binomial coefficient extended to
real np through the Gamma function.  Iterating it from p_{0,n} = p gives the
nested-trials array p_{k,n}.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .specfun import HALF_LOG_2PI, log_binomial, stirling_error

__all__ = [
    "MAX_STEPS",
    "Probability",
    "IterationTrace",
    "RateTheory",
    "as_probability",
    "log_pn",
    "log_pn_direct",
    "pn_map",
    "iterate",
    "theory_rates",
    "jacobsthal",
    "rate_recursion_check",
]

MAX_STEPS = 100_000


@dataclass(frozen=True)
class Probability:
    """A probability together with its natural log (-inf for 0)."""

    value: float
    log_value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {self.value!r}")
        if self.log_value > 0.0:
            raise ValueError(f"log probability must be <= 0, got {self.log_value!r}")

    @classmethod
    def from_value(cls, value):
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {value!r}")
        return cls(value, math.log(value) if value > 0.0 else -math.inf)

    @classmethod
    def from_log(cls, log_value):
        log_value = min(float(log_value), 0.0)
        return cls(math.exp(log_value), log_value)

    def __float__(self):
        return self.value


def as_probability(p):
    return p if isinstance(p, Probability) else Probability.from_value(p)


def _check_n(n):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def log_pn(n, p):
    """ln P_n(p), free of the cancellation between ln C(n, np) and np ln p.

    Writing every factorial through Stirling's formula with its exact
    remainder delta gives

        P_n(p) = exp(delta(n) - delta(np) - delta(n(1-p))) / sqrt(2 pi n p (1-p))

    because the expected count np makes the power terms cancel exactly.
    """
    n = _check_n(n)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    if n * p == 0.0 or n * q == 0.0:
        # subnormal distance from an endpoint; P_n is 1 to double precision
        return 0.0
    log_value = (
        -HALF_LOG_2PI
        - 0.5 * (math.log(n) + math.log(p) + math.log(q))
        + stirling_error(n)
        - stirling_error(n * p)
        - stirling_error(n * q)
    )
    return min(log_value, 0.0)


def log_pn_direct(n, p):
    """ln P_n(p) summed term by term: ln C(n, np) + np ln p + n(1-p) ln(1-p).

    Loses roughly n * eps absolute accuracy to cancellation; kept as a
    second route for cross-checking log_pn.
    """
    n = _check_n(n)
    p = float(p)
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    return log_binomial(n, n * p) + n * p * math.log(p) + n * q * math.log(q)


def pn_map(n, p):
    """One step of the recursion, p_{k-1,n} -> p_{k,n}.  P_n(0) = P_n(1) = 1."""
    return Probability.from_log(log_pn(n, as_probability(p).value))


@dataclass(frozen=True)
class IterationTrace:
    n: int
    p0: Probability
    entries: tuple  # ((k, Probability), ...)

    @property
    def values(self):
        return [p.value for _, p in self.entries]

    @property
    def last(self):
        return self.entries[-1][1]

    def __len__(self):
        return len(self.entries)


def iterate(n, p0, k_max):
    """p_{0,n}, p_{1,n}, ..., p_{k_max,n} starting from p0."""
    n = _check_n(n)
    p0 = as_probability(p0)
    if isinstance(k_max, bool) or int(k_max) != k_max or k_max < 0:
        raise ValueError(f"k_max must be a non-negative integer, got {k_max!r}")
    if k_max > MAX_STEPS:
        raise ValueError(f"k_max={k_max} exceeds the cap of {MAX_STEPS} steps")
    entries = [(0, p0)]
    p = p0
    for k in range(1, int(k_max) + 1):
        p = pn_map(n, p)
        entries.append((k, p))
    return IterationTrace(n, p0, tuple(entries))


@dataclass(frozen=True)
class RateTheory:
    """Closed-form constants of p_{k,n} ~ alpha_k (2 pi n)^(-beta_k)."""

    k: int
    alpha_k: float
    beta_k: Fraction
    jacobsthal_k: int


def jacobsthal(k):
    """J_k = (2^k - (-1)^k) / 3: 0, 1, 1, 3, 5, 11, ..."""
    return (2**k - (-1) ** k) // 3


def _beta(k):
    return (1 - Fraction(-1, 2) ** k) / 3


def _alpha(p, k):
    return (p * (1.0 - p)) ** ((-0.5) ** k)


def theory_rates(p, k):
    p = as_probability(p).value
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    return RateTheory(k, _alpha(p, k), _beta(k), jacobsthal(k))


def rate_recursion_check(k_max, p):
    """True iff alpha_k = alpha_{k-1}^(-1/2) and beta_k = (1 - beta_{k-1})/2 for k = 2..k_max."""
    if k_max < 2:
        raise ValueError(f"k_max must be at least 2, got {k_max!r}")
    prev = theory_rates(p, 1)
    for k in range(2, k_max + 1):
        cur = theory_rates(p, k)
        if cur.beta_k != (1 - prev.beta_k) / 2:
            return False
        expected = prev.alpha_k ** -0.5
        if not math.isclose(cur.alpha_k, expected, rel_tol=1e-12):
            return False
        prev = cur
    return True

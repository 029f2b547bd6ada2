"""Exact-rational and Monte Carlo oracles for the first stage of nested trials.

Both are only defined where the expected success count np is an integer.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..specfun import DomainError

__all__ = [
    "CHUNK_TRIALS",
    "EmpiricalEstimate",
    "exact_pmf",
    "expected_count",
    "simulate_stage1",
    "substream",
    "thread_count",
]

MASK64 = (1 << 64) - 1
CHUNK_TRIALS = 1 << 16
# uniforms drawn per generator call; bounds memory for large n
_BATCH_DRAWS = 1 << 20


def _check_rational(p_num, p_den):
    for name, v in (("p_num", p_num), ("p_den", p_den)):
        if isinstance(v, bool) or int(v) != v:
            raise DomainError(f"{name} must be an integer, got {v!r}")
    if p_den <= 0 or not 0 <= p_num <= p_den:
        raise DomainError(f"need 0 <= p_num <= p_den and p_den > 0, got {p_num}/{p_den}")
    return Fraction(int(p_num), int(p_den))


def exact_pmf(n, m, p_num, p_den):
    """C(n, m) p^m (1-p)^(n-m) as an exact Fraction, p = p_num/p_den."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if isinstance(m, bool) or int(m) != m or not 0 <= m <= n:
        raise DomainError(f"m must be an integer in 0..{n}, got {m!r}")
    p = _check_rational(p_num, p_den)
    return math.comb(n, m) * p**m * (1 - p) ** (n - m)


def expected_count(n, p_num, p_den):
    """np as an int; DomainError when it is not an integer."""
    p = _check_rational(p_num, p_den)
    m = n * p
    if m.denominator != 1:
        raise DomainError(
            f"n*p = {n}*{p_num}/{p_den} = {float(m)} is not an integer; "
            "the stage-1 oracles need an integer expected count"
        )
    return int(m)


@dataclass(frozen=True)
class EmpiricalEstimate:
    frequency: float
    trials: int
    std_error: float
    seed: int
    hits: int


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def substream(seed, j):
    """Philox generator for chunk j, keyed by seed XOR splitmix64(j)."""
    key = (seed ^ _splitmix64(j)) & MASK64
    return np.random.Generator(np.random.Philox(key=key))


def thread_count():
    """Worker cap from NBT_THREADS, else the CPU count."""
    raw = os.environ.get("NBT_THREADS")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"NBT_THREADS must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise ValueError(f"NBT_THREADS must be a positive integer, got {raw!r}")
        return value
    return os.cpu_count() or 1


def _count_chunk(seed, j, size, n, m, p):
    gen = substream(seed, j)
    rows = max(1, _BATCH_DRAWS // n)
    hits = 0
    done = 0
    while done < size:
        b = min(rows, size - done)
        successes = np.count_nonzero(gen.random((b, n)) < p, axis=1)
        hits += int(np.count_nonzero(successes == m))
        done += b
    return hits


def simulate_stage1(n, p_num, p_den, trials, seed, threads=None):
    """Frequency of runs of n Bernoulli(p) trials with exactly np successes.

    Trials are split into fixed chunks of CHUNK_TRIALS, each drawn from its
    own substream, and the per-chunk hit counts are summed as integers, so
    the result depends only on (n, p, trials, seed) and not on ``threads``.
    """
    m = expected_count(n, p_num, p_den)
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed <= MASK64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    trials, seed = int(trials), int(seed)
    p = p_num / p_den
    sizes = [CHUNK_TRIALS] * (trials // CHUNK_TRIALS)
    if trials % CHUNK_TRIALS:
        sizes.append(trials % CHUNK_TRIALS)
    workers = min(threads or thread_count(), len(sizes))
    jobs = [(seed, j, size, n, m, p) for j, size in enumerate(sizes)]
    if workers <= 1:
        hits = sum(_count_chunk(*job) for job in jobs)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(lambda job: _count_chunk(*job), jobs))
    freq = hits / trials
    return EmpiricalEstimate(freq, trials, math.sqrt(freq * (1.0 - freq) / trials), seed, hits)

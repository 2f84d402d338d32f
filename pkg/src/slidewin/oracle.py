"""Ground truth by brute force: exhaustive enumeration and seeded Monte Carlo.

Every permutation of ranks is equally likely, so the exact win probability
of a policy is its number of winning permutations over ``N!``.

Monte Carlo uses numpy's PCG64 generator. Trials are cut into fixed blocks
of :data:`MC_BLOCK` and block ``b`` draws from
``PCG64(SeedSequence(seed).spawn(n_blocks)[b])``, so the estimate depends
only on ``(seed, trials)`` and not on how blocks are spread over workers.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (InputError, Policy, ProblemSpec, ResourceError, execute,
                   prefix_order)

MAX_EXACT_N = 11
MC_BLOCK = 10_000


@dataclass(frozen=True)
class ExactProbability:
    numerator: int
    denominator: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator} = {float(self):.6f}"


@dataclass(frozen=True)
class MonteCarloEstimate:
    p_hat: float
    trials: int
    std_err: float
    seed: int
    wins: int

    def interval(self, z: float = 1.96) -> tuple[float, float]:
        return max(0.0, self.p_hat - z * self.std_err), min(1.0, self.p_hat + z * self.std_err)


def worker_count() -> int:
    """Parallelism cap from ``SLIDEWIN_THREADS`` (unset or 0 means all cores)."""
    raw = os.environ.get("SLIDEWIN_THREADS", "0").strip() or "0"
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"SLIDEWIN_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise InputError(f"SLIDEWIN_THREADS must be >= 0, got {value}")
    return value or (os.cpu_count() or 1)


def _map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _count_with_head(n, k, case, threshold_sets, head):
    """Wins of each policy over the permutations starting with ``head``."""
    rest = [r for r in range(1, n + 1) if r != head]
    wins = [0] * len(threshold_sets)
    for tail in itertools.permutations(rest):  # lexicographic order
        ranks = (head,) + tail
        prefix = prefix_order(ranks)
        for j, th in enumerate(threshold_sets):
            if execute(ranks, n, k, case, th, prefix).win:
                wins[j] += 1
    return wins


def exact_win_counts(spec: ProblemSpec, policies: Sequence[Policy],
                     workers: int | None = None) -> list[int]:
    """Winning-permutation counts of several policies in one enumeration pass.

    The permutations are split by their first rank into ``N`` disjoint
    ranges; the per-range counts are summed, so the result does not depend
    on ``workers``.
    """
    n = spec.n
    if n > MAX_EXACT_N:
        raise ResourceError(f"exact enumeration is capped at n={MAX_EXACT_N}, got {n}")
    for pol in policies:
        pol.validate(spec)
    thresholds = [pol.thresholds for pol in policies]
    workers = worker_count() if workers is None else workers
    if n <= 7:
        workers = 1  # process start-up costs more than the work
    jobs = [(n, spec.k, spec.case, thresholds, head) for head in range(1, n + 1)]
    parts = _map(_count_with_head, jobs, workers)
    return [sum(col) for col in zip(*parts)]


def exact_win_probability(spec: ProblemSpec, pol: Policy,
                          workers: int | None = None) -> ExactProbability:
    wins = exact_win_counts(spec, [pol], workers)[0]
    return ExactProbability(wins, math.factorial(spec.n))


def _block_wins(n, k, case, thresholds, seed_seq, size):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    # each row is an independent Fisher-Yates shuffle of 1..n
    perms = rng.permuted(np.tile(np.arange(1, n + 1), (size, 1)), axis=1)
    wins = 0
    for row in perms.tolist():
        if execute(row, n, k, case, thresholds).win:
            wins += 1
    return wins


def combine(block_wins: Sequence[int], trials: int, seed: int) -> MonteCarloEstimate:
    """Merge per-block win counts into one estimate (order-independent)."""
    wins = int(sum(block_wins))
    p = wins / trials
    return MonteCarloEstimate(p, trials, math.sqrt(p * (1.0 - p) / trials), seed, wins)


def monte_carlo(spec: ProblemSpec, pol: Policy, trials: int, seed: int,
                workers: int | None = None) -> MonteCarloEstimate:
    if not isinstance(trials, int) or trials < 1:
        raise InputError(f"trials must be a positive integer, got {trials!r}")
    if not isinstance(seed, int) or seed < 0:
        raise InputError(f"seed must be a nonnegative integer, got {seed!r}")
    pol.validate(spec)
    n_blocks = -(-trials // MC_BLOCK)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    sizes = [MC_BLOCK] * (n_blocks - 1) + [trials - MC_BLOCK * (n_blocks - 1)]
    jobs = [(spec.n, spec.k, spec.case, pol.thresholds, child, size)
            for child, size in zip(children, sizes)]
    workers = worker_count() if workers is None else workers
    return combine(_map(_block_wins, jobs, workers), trials, seed)

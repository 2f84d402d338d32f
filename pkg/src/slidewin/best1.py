"""Win probabilities for the Best-1 case (one choice, win only with the best).

After the threshold ``d`` the sequence is cut into blocks of ``K``
positions; the sliding rule allows at most one candidate per block, which
is what lets the stopping probabilities be accumulated block by block.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .core import DomainError, InputError, check_window

DEFAULT_N_EFF = 100_000

# Below this window size a plain loop beats per-block numpy calls.
_SCALAR_K = 64


def _check(n: int, k: int, d: int) -> None:
    check_window(n, k)
    if not isinstance(d, (int, np.integer)) or not 0 <= d <= n - 1:
        raise InputError(f"threshold d must be in [0, {n - 1}], got {d}")


def block_index(a: int, d: int, k: int) -> int:
    """Block number of position ``a`` counted from the threshold (ceil((a-d)/k))."""
    return -((d - a) // k)


def seen_counts(n: int, k: int) -> np.ndarray:
    """``L[m] = min(m+K-1, N)``, the number of applicants seen with ``m`` at the front."""
    m = np.arange(n + 1, dtype=float)
    return np.minimum(m + k - 1, n)


def stop_profile(n: int, k: int, d: int, one=1.0) -> list:
    """Plain-loop :func:`cumulative_stop` in the number type of ``one``
    (pass ``Fraction(1)`` for exact rationals)."""
    zero = one - one
    S = [zero] * (n + 1)
    for m in range(d + 1, n + 1):
        prev = S[m - k] if m - k > d else zero
        S[m] = S[m - 1] + (one - prev) / min(m + k - 1, n)
    return S


def cumulative_stop(n: int, k: int, d: int) -> np.ndarray:
    """Probability of having stopped at or before each position.

    ``S[a]`` (index 0..n) is the probability that the first candidate after
    ``d`` lies in ``(d, a]``. A position ``m`` is a candidate with
    probability ``1/L[m]`` independently of whether a stop happened in
    ``(d, m-K]``, and positions ``m-K+1..m-1`` cannot be candidates when
    ``m`` is one.
    """
    if k < _SCALAR_K:
        return np.array(stop_profile(n, k, d, 1.0))
    seen = seen_counts(n, k)
    S = np.zeros(n + 1)
    start = d + 1
    while start <= n:
        stop = min(start + k - 1, n)
        m = np.arange(start, stop + 1)
        prev = np.where(m - k > d, S[np.maximum(m - k, 0)], 0.0)
        S[start:stop + 1] = S[start - 1] + np.cumsum((1.0 - prev) / seen[m])
        start = stop + 1
    return S


class Best1Recursion:
    """Block recursion for the stopping profile ``f`` and win profile ``sigma``.

    ``f(a)`` is the probability of stopping inside the block containing
    ``a``, from the block's first position up to ``a``; ``sigma(a)`` is the
    probability of winning with a candidate in ``[1, a]``.
    """

    def __init__(self, n: int, k: int, d: int):
        _check(n, k, d)
        self.n, self.k, self.d = n, k, d
        self._S = cumulative_stop(n, k, d)
        terms = np.zeros(n + 1)
        j = np.arange(d + 1, n + 1)
        prev = np.where(j - k > d, self._S[np.maximum(j - k, 0)], 0.0)
        terms[d + 1:] = 1.0 - prev
        # sum first, divide once: keeps certain wins at exactly 1.0
        self._sigma = np.cumsum(terms) / n
        self._total = math.fsum(terms) / n

    def _in_range(self, a: int) -> bool:
        if a > self.n:
            raise InputError(f"position {a} beyond n={self.n}")
        return a > self.d

    def block(self, a: int) -> int:
        return block_index(a, self.d, self.k)

    def f(self, a: int) -> float:
        if not self._in_range(a):
            return 0.0
        block_start = self.d + (self.block(a) - 1) * self.k
        return float(self._S[a] - self._S[block_start])

    def stopped_before(self, a: int) -> float:
        """Sum of whole-block ``f`` values before ``a``'s block plus the partial block at ``a``."""
        if not self._in_range(a):
            return 0.0
        return float(self._S[a])

    def sigma(self, a: int) -> float:
        if not self._in_range(a):
            return 0.0
        return float(self._sigma[a])

    def win_probability(self) -> float:
        return self._total


def win_probability_exact(n: int, k: int, d: int) -> Fraction:
    """The block recursion evaluated in rational arithmetic."""
    _check(n, k, d)
    S = stop_profile(n, k, d, Fraction(1))
    return sum((1 - (S[j - k] if j - k > d else 0) for j in range(d + 1, n + 1)),
               Fraction(0)) / n


def f_rec(n: int, k: int, d: int, a: int) -> float:
    """Probability of stopping between the start of ``a``'s block and ``a``.

    Positions at or before the threshold give 0.
    """
    check_window(n, k)
    if a > n:
        raise InputError(f"position {a} beyond n={n}")
    if a <= d:
        return 0.0
    return Best1Recursion(n, k, d).f(a)


def win_probability(n: int, k: int, d: int) -> float:
    return Best1Recursion(n, k, d).win_probability()


def win_probability_table(n: int, k: int) -> np.ndarray:
    """Win probability for every threshold ``d = 0..n-1`` in one O(N) pass.

    Uses record positions (prefix maxima): a position is a candidate iff it
    is a record and the next record is at least ``K`` positions later, or
    there is none. ``V[r]`` is the win probability given the scan has
    reached a record at ``r`` with no stop yet.
    """
    check_window(n, k)
    V = np.zeros(n + 2)
    acc = 0.0  # sum of V[s] / ((s-1) s) over s in (r, r+K-1]
    for r in range(n, 0, -1):
        V[r] = r / n + r * acc
        if r >= 2:
            acc += V[r] / ((r - 1) * r)
        out = r + k - 1
        if 2 <= out <= n:
            acc -= V[out] / ((out - 1) * out)
    W = np.zeros(n)
    W[0] = V[1]
    if n > 1:
        r = np.arange(2, n + 1)
        tail = np.cumsum((V[2:n + 1] / ((r - 1) * r))[::-1])[::-1]
        W[1:] = np.arange(1, n) * tail
    return W


def win_probability_k2(n: int, d: int) -> float:
    """Closed form for ``K = 2`` from chains of strictly improving ranks."""
    if d < 1:
        raise InputError("the K=2 closed form needs d >= 1; use win_probability for d=0")
    if n < d + 3:
        raise InputError(f"the K=2 closed form needs n >= d+3, got n={n}, d={d}")
    # ratio(j) = sum_{i=d+1..j} (i-2)! / (j-1)!, advanced without factorials
    ratio = 1.0 / d
    total = 0.0
    for j in range(d + 1, n):
        ratio = (ratio + 1.0) / j
        if j + 1 >= d + 3:
            total += ratio
    return 2.0 / n + d / n * total


def large_window_exact(n: int, k: int) -> float:
    check_window(n, k)
    if 2 * k < n:
        raise DomainError(f"large-window formula needs k >= n/2, got n={n}, k={k}")
    total = 0.0
    harmonic = 0.0
    for j in range(k + 1, n + 1):
        harmonic += 1.0 / (j - 1)  # adds 1/(m+K-1) for m = j-K
        total += 1.0 - harmonic
    return k / n + total / n


def large_window_asymptotic(w: float) -> float:
    if not 0.5 <= w <= 1.0:
        raise DomainError(f"large-window limit needs 0.5 <= w <= 1, got {w}")
    return 2.0 - w + math.log(w)


def classical_win_probability(n: int, d: int) -> float:
    """Window of one: reject ``d`` applicants, then take the next record."""
    _check(n, 1, d)
    if d == 0:
        return 1.0 / n
    return sum(d / (j - 1) for j in range(d + 1, n + 1)) / n


def scaled_parameters(w: float, rho: float, n_eff: int) -> tuple[int, int]:
    k = min(n_eff, max(1, round(w * n_eff)))
    d = min(n_eff - 1, max(0, round(rho * n_eff)))
    return k, d


def asymptotic_win_probability(w: float, rho: float, n_eff: int = DEFAULT_N_EFF) -> float:
    """Large-N win probability at window fraction ``w`` and threshold fraction ``rho``.

    Evaluated by running the exact recursion at ``N = n_eff`` with
    ``K = round(w N)`` (at least 1, so ``w = 0`` is the classical limit) and
    ``d = round(rho N)``.
    """
    if not 0.0 <= w <= 1.0:
        raise InputError(f"w must lie in [0, 1], got {w}")
    if not 0.0 <= rho < 1.0:
        raise InputError(f"rho must lie in [0, 1), got {rho}")
    k, d = scaled_parameters(w, rho, n_eff)
    return win_probability(n_eff, k, d)

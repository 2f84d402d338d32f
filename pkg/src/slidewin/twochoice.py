"""Win probabilities for the 2-Choice case (two choices, win if either is the best).

Policy ``(delta1, delta2)``: the first choice is the first candidate after
``delta1``; the second is the first candidate after both the first choice
and ``delta2``. Since a candidate excludes any other candidate in its own
block, the search for the second choice restarts from scratch at
``max(m1 + K - 1, delta2)``, where ``m1`` is the first choice.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import best1
from .core import InputError, ProblemCase, check_thresholds, check_window
from .best1 import DEFAULT_N_EFF, block_index, cumulative_stop


def _cum(n: int, k: int, x: int) -> np.ndarray:
    """Cumulative stopping profile for a fresh search after ``x`` (all zero when ``x >= n``)."""
    if x >= n:
        return np.zeros(n + 1)
    return cumulative_stop(n, k, x)


def f2(n: int, k: int, x: int, a: int) -> float:
    """Probability of choosing in ``a``'s block (anchored at ``x``) up to ``a``."""
    check_window(n, k)
    if not 0 <= x <= n or a > n:
        raise InputError(f"need 0 <= x <= n and a <= n, got x={x}, a={a}, n={n}")
    if a <= x:
        return 0.0
    S = _cum(n, k, x)
    block_start = x + (block_index(a, x, k) - 1) * k
    return float(S[a] - S[block_start])


def c_stop(n: int, k: int, m: int, x: int) -> float:
    """Probability of making a choice exactly at ``m`` when no choice is made up to ``x``."""
    check_window(n, k)
    if m > n or x < 0:
        raise InputError(f"need m <= n and x >= 0, got m={m}, x={x}")
    if m <= x:
        return 0.0
    S = _cum(n, k, x)
    return float(S[m] - S[m - 1])


def g_gap(n: int, k: int, m: int, x: int, b: int) -> float:
    """Choice at ``m``, then no further choice before ``b`` can front the window.

    Zero when ``b`` lies in ``m``'s own block.
    """
    check_window(n, k)
    if m <= x:
        raise InputError(f"need m > x, got m={m}, x={x}")
    if b > n:
        raise InputError(f"position {b} beyond n={n}")
    if b - m < k:
        return 0.0
    anchor = m + k - 1
    after = _cum(n, k, anchor)
    quiet = 1.0 - (float(after[b - k]) if b - k > anchor else 0.0)
    return c_stop(n, k, m, x) * quiet


def early_choice_probability(n: int, k: int, delta1: int, delta2: int) -> float:
    """Probability ``p_b`` that the first choice falls in ``(delta1, delta2-K+1]``."""
    last = delta2 - k + 1
    if last <= delta1:
        return 0.0
    return float(_cum(n, k, delta1)[min(last, n)])


class TwoChoiceRecursion:
    def __init__(self, n: int, k: int, delta1: int, delta2: int,
                 tail_wins: np.ndarray | None = None):
        check_window(n, k)
        check_thresholds(ProblemCase.TWO_CHOICE, n, k, (delta1, delta2))
        self.n, self.k, self.delta1, self.delta2 = n, k, delta1, delta2
        # tail_wins[x]: probability the overall best is taken by a fresh
        # search after x; the Best-1 win probability with threshold x
        self._tail = best1.win_probability_table(n, k) if tail_wins is None else tail_wins
        self._S1 = cumulative_stop(n, k, delta1)

    def tail_win(self, x: int) -> float:
        return float(self._tail[x]) if x < self.n else 0.0

    def p_b(self) -> float:
        last = self.delta2 - self.k + 1
        return float(self._S1[min(last, self.n)]) if last > self.delta1 else 0.0

    def sigmas(self) -> tuple[float, float, float]:
        """(i) first choice wins; (ii) second wins after an early first choice
        at or before ``delta2-K+1``; (iii) second wins after a later first choice."""
        n, k, d1, d2 = self.n, self.k, self.delta1, self.delta2
        s1 = best1.Best1Recursion(n, k, d1).win_probability()
        s2 = self.p_b() * self.tail_win(d2) if d2 < n else 0.0
        first = max(d1 + 1, d2 - k + 2)
        s3 = 0.0
        if first <= n:
            m = np.arange(first, n + 1)
            c = self._S1[m] - self._S1[m - 1]
            anchors = m + k - 1
            tails = np.where(anchors < n, self._tail[np.minimum(anchors, n - 1)], 0.0)
            s3 = float(np.sum(c * tails))
        return s1, s2, s3

    def win_probability(self) -> float:
        return math.fsum(self.sigmas())


def win_probability(n: int, k: int, delta1: int, delta2: int) -> float:
    return TwoChoiceRecursion(n, k, delta1, delta2).win_probability()


def win_probability_exact(n: int, k: int, delta1: int, delta2: int) -> Fraction:
    """:class:`TwoChoiceRecursion` evaluated in rational arithmetic (small ``n``)."""
    check_window(n, k)
    check_thresholds(ProblemCase.TWO_CHOICE, n, k, (delta1, delta2))

    def tail(x):
        return best1.win_probability_exact(n, k, x) if x < n else Fraction(0)

    S1 = best1.stop_profile(n, k, delta1, Fraction(1))
    s1 = tail(delta1)
    last = delta2 - k + 1
    s2 = (S1[min(last, n)] if last > delta1 else 0) * tail(delta2)
    s3 = sum(((S1[m] - S1[m - 1]) * tail(m + k - 1)
              for m in range(max(delta1 + 1, delta2 - k + 2), n + 1)), Fraction(0))
    return s1 + s2 + s3


def win_probability_row(n: int, k: int, delta1: int,
                        tail_wins: np.ndarray | None = None) -> dict[int, float]:
    """Win probability for every feasible ``delta2`` at a fixed ``delta1``."""
    d2, values = row_arrays(n, k, delta1, tail_wins)
    return {int(b): float(v) for b, v in zip(d2, values)}


def row_arrays(n: int, k: int, delta1: int,
               tail_wins: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """:func:`win_probability_row` as ``(delta2 values, win probabilities)`` arrays."""
    check_window(n, k)
    if not 0 <= delta1 <= n - 1:
        raise InputError(f"delta1 must be in [0, {n - 1}], got {delta1}")
    tail = best1.win_probability_table(n, k) if tail_wins is None else tail_wins
    if delta1 + k > n - 1:
        v = TwoChoiceRecursion(n, k, delta1, n - 1, tail).win_probability()
        return np.array([n - 1]), np.array([v])
    S1 = cumulative_stop(n, k, delta1)
    s1 = float(tail[delta1])
    d2 = np.arange(delta1 + k, n)
    last = d2 - k + 1
    p_b = np.where(last > delta1, S1[np.minimum(last, n)], 0.0)
    s2 = p_b * tail[d2]
    # s3(d2) = sum over m >= d2-K+2 of c(m) * tail(m+K-1): a suffix sum in m
    m = np.arange(1, n + 1)
    c = np.where(m > delta1, S1[m] - S1[m - 1], 0.0)
    anchors = m + k - 1
    contrib = c * np.where(anchors < n, tail[np.minimum(anchors, n - 1)], 0.0)
    suffix = np.concatenate([np.cumsum(contrib[::-1])[::-1], [0.0]])
    first = np.maximum(delta1 + 1, d2 - k + 2)
    s3 = suffix[np.minimum(first, n + 1) - 1]
    return d2, s1 + s2 + s3


def scaled_thresholds(w, rho1, rho2, n_eff):
    k = min(n_eff, max(1, round(w * n_eff)))
    d1 = min(n_eff - 1, max(0, round(rho1 * n_eff)))
    if d1 + k > n_eff - 1:
        return k, d1, n_eff - 1
    d2 = min(n_eff - 1, round(rho2 * n_eff))
    if d2 < d1 + k:
        if rho2 < rho1 + w - 1.0 / n_eff:
            raise InputError(f"need rho2 >= rho1 + w, got rho1={rho1}, rho2={rho2}, w={w}")
        d2 = d1 + k  # rounding slack only
    return k, d1, d2


def asymptotic_win_probability(w: float, rho1: float, rho2: float,
                               n_eff: int = DEFAULT_N_EFF) -> float:
    if not 0.0 <= w <= 1.0:
        raise InputError(f"w must lie in [0, 1], got {w}")
    if not 0.0 <= rho1 < 1.0 or not 0.0 <= rho2 < 1.0:
        raise InputError(f"rho1, rho2 must lie in [0, 1), got {rho1}, {rho2}")
    k, d1, d2 = scaled_thresholds(w, rho1, rho2, n_eff)
    return win_probability(n_eff, k, d1, d2)

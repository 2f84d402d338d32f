"""Win probabilities for the Best-2 case (one choice, win with the best or second best).

Policy ``(d1, d2)``: pass the first ``d1`` applicants, take the first
1-candidate after ``d1``, and from ``d2`` on also take a 2-candidate whose
better applicant has already left the window.

Three stopping profiles are tracked, each as a cumulative sum over
positions (a block-sum of whole blocks plus the partial block):

* ``h`` - stopping at a 2-candidate, conditioned on the best applicant seen
  so far lying in ``[1, d1]``;
* ``g`` - stopping at a 2-candidate (unconditioned, hence the extra
  ``d1 / L`` factor);
* ``f`` - stopping at a 1-candidate.

``L = min(i+K-1, N)`` is the number of applicants seen while ``i`` fronts
the window.
"""

from __future__ import annotations

import math

import numpy as np

from .core import DomainError, InputError, ProblemCase, check_thresholds, check_window
from .best1 import _SCALAR_K, DEFAULT_N_EFF, block_index


def _profiles_scalar(n, k, d1, d2):
    H = [0.0] * (n + 1)
    G = [0.0] * (n + 1)
    F = [0.0] * (n + 1)
    for i in range(1, n + 1):
        seen = min(i + k - 1, n)
        back = i - k
        h = g = f = 0.0
        if i > d2 and seen >= 2:
            c = H[back] if back > d2 else 0.0
            h = (1.0 - c) / (seen - 1)
            g = d1 / seen * h
        if i > d1:
            t = (F[back] + G[back]) if back > 0 else 0.0
            f = (1.0 - t) / seen
        H[i] = H[i - 1] + h
        G[i] = G[i - 1] + g
        F[i] = F[i - 1] + f
    return np.array(H), np.array(G), np.array(F)


def _profiles_blocked(n, k, d1, d2):
    H = np.zeros(n + 1)
    G = np.zeros(n + 1)
    F = np.zeros(n + 1)
    start = 1
    while start <= n:
        stop = min(start + k - 1, n)
        i = np.arange(start, stop + 1)
        seen = np.minimum(i + k - 1, n).astype(float)
        back = i - k
        safe = np.maximum(back, 0)
        c = np.where(back > d2, H[safe], 0.0)
        live2 = (i > d2) & (seen >= 2)
        h = np.where(live2, (1.0 - c) / np.maximum(seen - 1, 1), 0.0)
        g = d1 / seen * h
        t = np.where(back > 0, F[safe] + G[safe], 0.0)
        f = np.where(i > d1, (1.0 - t) / seen, 0.0)
        H[start:stop + 1] = H[start - 1] + np.cumsum(h)
        G[start:stop + 1] = G[start - 1] + np.cumsum(g)
        F[start:stop + 1] = F[start - 1] + np.cumsum(f)
        start = stop + 1
    return H, G, F


class Best2Recursion:
    def __init__(self, n: int, k: int, d1: int, d2: int):
        check_window(n, k)
        check_thresholds(ProblemCase.BEST2, n, k, (d1, d2))
        self.n, self.k, self.d1, self.d2 = n, k, d1, d2
        build = _profiles_scalar if k < _SCALAR_K else _profiles_blocked
        self._H, self._G, self._F = build(n, k, d1, d2)

    def c(self, i: int) -> float:
        """Probability of a conditioned 2-candidate stop in ``(d2, i-K]``."""
        back = i - self.k
        return float(self._H[back]) if back > self.d2 else 0.0

    def t(self, i: int) -> float:
        """Probability of any stop in ``(d1, i-K]``."""
        back = i - self.k
        return float(self._F[back] + self._G[back]) if back > 0 else 0.0

    def _partial(self, cum, anchor, a):
        if a > self.n:
            raise InputError(f"position {a} beyond n={self.n}")
        if a <= anchor:
            return 0.0
        block_start = anchor + (block_index(a, anchor, self.k) - 1) * self.k
        return float(cum[a] - cum[block_start])

    def h(self, a: int) -> float:
        return self._partial(self._H, self.d2, a)

    def g(self, a: int) -> float:
        return self._partial(self._G, self.d2, a)

    def f(self, a: int) -> float:
        return self._partial(self._F, self.d1, a)

    def sigmas(self) -> tuple[float, float, float]:
        """Win probability split by where the top two applicants sit.

        (i) best in ``[1, d1]``, second after ``d2``; (ii) second in
        ``[1, d1]``, best after ``d1``; (iii) both after ``d1``.
        """
        n, k, d1, d2 = self.n, self.k, self.d1, self.d2
        if n == 1:
            return 0.0, 0.0, 1.0
        i = np.arange(1, n + 1)
        back = i - k
        safe = np.maximum(back, 0)
        c = np.where(back > d2, self._H[safe], 0.0)
        t = np.where(back > 0, self._F[safe] + self._G[safe], 0.0)
        pair = d1 / (n * (n - 1))
        s1 = pair * float(np.sum((1.0 - c)[i > d2]))
        # best after d1 is reached unless a conditioned 2-candidate stop
        # intervenes, which needs i - K > d2; positions in (d1, d2] count fully
        s2 = pair * float(np.sum((1.0 - c)[i > d1]))
        first_of_pair = 2.0 * (n - i) / (n * (n - 1))
        s3 = float(np.sum((first_of_pair * (1.0 - t))[i > d1]))
        return s1, s2, s3

    def win_probability(self) -> float:
        return math.fsum(self.sigmas())


def hgf_rec(n: int, k: int, d1: int, d2: int, which: str, a: int) -> float:
    which = str(which).upper()
    if which not in ("H", "G", "F"):
        raise InputError(f"which must be one of H, G, F, got {which!r}")
    rec = Best2Recursion(n, k, d1, d2)
    return {"H": rec.h, "G": rec.g, "F": rec.f}[which](a)


def win_probability(n: int, k: int, d1: int, d2: int) -> float:
    return Best2Recursion(n, k, d1, d2).win_probability()


def near_full_window_losses(n: int) -> dict[tuple[int, int], float]:
    """Loss probabilities at ``K = N-2`` for the four candidate threshold pairs.

    Key ``(0, 0)`` stands for every pair with ``d1 = 0``; the second
    threshold does not matter there.
    """
    if n < 5:
        raise DomainError(f"near-full-window casework needs n >= 5, got {n}")
    triple = n * (n - 1) * (n - 2)
    return {
        (0, 0): 2.0 / triple,
        (1, 1): 2.0 / triple,
        (1, 2): 1.0 / (n * (n - 1)),
        (2, 2): 2.0 / (n * (n - 1)),
    }


def d2_unit_boundary(n: int) -> float:
    """Window size above which the second threshold drops to 1."""
    if n < 3:
        raise InputError(f"needs n >= 3, got {n}")
    return (math.sqrt(8 * (n - 1) ** 2 + 1) + 1) / 4


def scaled_thresholds(w, rho1, rho2, n_eff):
    k = min(n_eff, max(1, round(w * n_eff)))
    d1 = min(n_eff - 1, max(0, round(rho1 * n_eff)))
    d2 = min(n_eff - 1, max(d1, round(rho2 * n_eff)))
    return k, d1, d2


def asymptotic_win_probability(w: float, rho1: float, rho2: float,
                               n_eff: int = DEFAULT_N_EFF) -> float:
    if not 0.0 <= w <= 1.0:
        raise InputError(f"w must lie in [0, 1], got {w}")
    if not 0.0 <= rho1 <= rho2 < 1.0:
        raise InputError(f"need 0 <= rho1 <= rho2 < 1, got rho1={rho1}, rho2={rho2}")
    k, d1, d2 = scaled_thresholds(w, rho1, rho2, n_eff)
    return win_probability(n_eff, k, d1, d2)

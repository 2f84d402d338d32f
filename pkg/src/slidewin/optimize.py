"""Optimal thresholds: exhaustive scans at finite N and a large-N curve optimizer."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import best1, best2, twochoice
from .core import (InputError, Policy, ProblemCase, ProblemSpec, ResourceError,
                   check_window)
from .best1 import DEFAULT_N_EFF

TIE_TOL = 1e-12
MAX_REPORT_N = 30
COARSE_STEP = 0.01
RHO_TOL = 1e-4


@dataclass(frozen=True)
class OptimalResult:
    spec: ProblemSpec
    best_policies: tuple[Policy, ...]
    p_win: float

    @property
    def thresholds(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p.thresholds for p in self.best_policies)


def _collect(spec: ProblemSpec, scored: Sequence[tuple[Policy, float]]) -> OptimalResult:
    top = max(v for _, v in scored)
    winners = sorted((p for p, v in scored if v >= top - TIE_TOL), key=lambda p: p.thresholds)
    return OptimalResult(spec, tuple(winners), top)


def optimal_best1(n: int, k: int) -> OptimalResult:
    spec = ProblemSpec(n, k, ProblemCase.BEST1)
    return _collect(spec, [(Policy.best1(d), best1.win_probability(n, k, d)) for d in range(n)])


def optimal_best2(n: int, k: int) -> OptimalResult:
    spec = ProblemSpec(n, k, ProblemCase.BEST2)
    scored = [(Policy.best2(d1, d2), best2.win_probability(n, k, d1, d2))
              for d1 in range(n) for d2 in range(d1, n)]
    return _collect(spec, scored)


def optimal_twochoice(n: int, k: int) -> OptimalResult:
    spec = ProblemSpec(n, k, ProblemCase.TWO_CHOICE)
    tail = best1.win_probability_table(n, k)
    rows = [twochoice.row_arrays(n, k, delta1, tail) for delta1 in range(n)]
    top = max(float(values.max()) for _, values in rows)
    winners = [Policy.two_choice(delta1, int(b))
               for delta1, (d2, values) in enumerate(rows)
               for b in d2[values >= top - TIE_TOL]]
    return OptimalResult(spec, tuple(winners), top)


_OPTIMIZERS = {
    ProblemCase.BEST1: optimal_best1,
    ProblemCase.BEST2: optimal_best2,
    ProblemCase.TWO_CHOICE: optimal_twochoice,
}


def optimal(case, n: int, k: int) -> OptimalResult:
    return _OPTIMIZERS[ProblemCase.parse(case)](n, k)


# --------------------------------------------------------------- asymptotics

@dataclass(frozen=True)
class CurvePoint:
    w: float
    rho_star: tuple[float, ...]
    p_win: float


def golden_max(fn: Callable[[float], float], lo: float, hi: float,
               tol: float = RHO_TOL) -> tuple[float, float]:
    """Maximize a unimodal ``fn`` on ``[lo, hi]``; returns ``(x, fn(x))``."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = fn(d)
    # the ends are checked too, since optima often sit on a boundary (rho = 0)
    best = max([(fc, c), (fd, d), (fn(lo), lo), (fn(hi), hi)], key=lambda t: t[0])
    return best[1], best[0]


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(math.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(count + 1)


def _bracket(x: float, step: float, lo: float, hi: float) -> tuple[float, float]:
    return max(lo, x - step), min(hi, x + step)


@lru_cache(maxsize=8)
def _tail_table(n: int, k: int) -> np.ndarray:
    return best1.win_probability_table(n, k)


def _curve_best1(w, n_eff, step):
    k = best1.scaled_parameters(w, 0.0, n_eff)[0]
    table = _tail_table(n_eff, k)  # every threshold at once

    def p(rho):
        return float(table[best1.scaled_parameters(w, rho, n_eff)[1]])

    hi = (n_eff - 1) / n_eff
    coarse = _grid(0.0, hi, step)
    start = coarse[int(np.argmax([p(r) for r in coarse]))]
    rho, value = golden_max(p, *_bracket(start, step, 0.0, hi))
    return (rho,), value


def _curve_best2(w, n_eff, step):
    def p(r1, r2):
        return best2.asymptotic_win_probability(w, r1, r2, n_eff)

    hi = (n_eff - 1) / n_eff
    coarse = _grid(0.0, hi, step)
    best_val, best_pt = -1.0, (0.0, 0.0)
    for r1 in coarse:
        for r2 in coarse[coarse >= r1 - 1e-12]:
            v = p(r1, max(r1, r2))
            if v > best_val:
                best_val, best_pt = v, (r1, max(r1, r2))

    # nested refinement: golden search over rho1, each probe maximizing rho2
    def inner(r1):
        lo2, hi2 = _bracket(best_pt[1], step, r1, hi)
        if hi2 <= lo2:
            return lo2, p(r1, lo2)
        return golden_max(lambda r2: p(r1, r2), lo2, hi2)

    cache = {}

    def outer(r1):
        cache[r1] = inner(r1)
        return cache[r1][1]

    r1, value = golden_max(outer, *_bracket(best_pt[0], step, 0.0, hi))
    if value < best_val:
        return best_pt, best_val
    return (r1, cache[r1][0]), value


def _curve_twochoice(w, n_eff, step):
    k = best1.scaled_parameters(w, 0.0, n_eff)[0]
    tail = _tail_table(n_eff, k)

    def row_best(r1):
        # for fixed rho1 the whole delta2 row costs one O(N) pass
        delta1 = best1.scaled_parameters(w, r1, n_eff)[1]
        d2, values = twochoice.row_arrays(n_eff, k, delta1, tail)
        j = int(np.argmax(values))
        return int(d2[j]) / n_eff, float(values[j])

    hi = (n_eff - 1) / n_eff
    coarse = _grid(0.0, hi, step)
    values = [row_best(r)[1] for r in coarse]
    start = coarse[int(np.argmax(values))]
    cache = {}

    def outer(r1):
        cache[r1] = row_best(r1)
        return cache[r1][1]

    r1, value = golden_max(outer, *_bracket(start, step, 0.0, hi))
    return (r1, cache[r1][0]), value


_CURVES = {
    ProblemCase.BEST1: _curve_best1,
    ProblemCase.BEST2: _curve_best2,
    ProblemCase.TWO_CHOICE: _curve_twochoice,
}


def asymptotic_curve(case, w_grid: Sequence[float], n_eff: int = DEFAULT_N_EFF,
                     coarse_step: float = COARSE_STEP) -> list[CurvePoint]:
    """Optimal normalized thresholds and win probability for each window fraction.

    Large N is emulated by the exact recursion at ``N = n_eff``. A coarse
    grid over the threshold fractions locates the peak, then golden-section
    search (nested for two thresholds) refines it. The refinement assumes
    the win probability is unimodal near the coarse peak. ``w = 0`` is taken
    as the window-of-one limit.
    """
    case = ProblemCase.parse(case)
    grid = list(w_grid)
    if not grid:
        raise InputError("w_grid must not be empty")
    for w in grid:
        if not 0.0 <= w <= 1.0:
            raise InputError(f"window fractions must lie in [0, 1], got {w}")
    if not 0.0 < coarse_step < 1.0:
        raise InputError(f"coarse_step must lie in (0, 1), got {coarse_step}")
    out = []
    for w in grid:
        rho, value = _CURVES[case](float(w), n_eff, coarse_step)
        # report the thresholds actually evaluated, d / n_eff
        rho = tuple(min(n_eff - 1, max(0, round(r * n_eff))) / n_eff for r in rho)
        # summation error at large n_eff can overshoot a certain win by ~1e-14
        out.append(CurvePoint(float(w), rho, min(1.0, float(value))))
    return out


# -------------------------------------------------------------- monotonicity

@dataclass
class MonotonicityReport:
    case: ProblemCase
    n: int
    p_win: list[float] = field(default_factory=list)
    thresholds: list[tuple[int, ...]] = field(default_factory=list)
    failures: list[tuple[str, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _smallest_thresholds(res: OptimalResult) -> tuple[int, ...]:
    """Componentwise smallest threshold over all maximizers."""
    return tuple(min(col) for col in zip(*res.thresholds))


def monotonicity_report(case, n: int) -> MonotonicityReport:
    """Scan ``K = 1..n`` and check the window-size monotonicity claims.

    The optimal win probability must rise strictly with ``K`` until it
    reaches 1 and stay there after and the smallest optimal thresholds must not rise.
    For 2-Choice only the first threshold is checked, because the second is
    tied to ``delta1 + K``. Failures carry the offending ``K``.
    """
    case = ProblemCase.parse(case)
    check_window(n, 1)
    if n > MAX_REPORT_N:
        raise ResourceError(f"monotonicity scans are capped at n={MAX_REPORT_N}, got {n}")
    rep = MonotonicityReport(case, n)
    for k in range(1, n + 1):
        res = optimal(case, n, k)
        rep.p_win.append(res.p_win)
        rep.thresholds.append(_smallest_thresholds(res))
    checked = 1 if case is ProblemCase.TWO_CHOICE else len(rep.thresholds[0])
    for k in range(2, n + 1):
        prev, cur = rep.p_win[k - 2], rep.p_win[k - 1]
        if prev >= 1.0 - TIE_TOL:  # a certain win cannot improve
            if cur < 1.0 - TIE_TOL:
                rep.failures.append(("saturation", k))
        elif not cur > prev + TIE_TOL:
            rep.failures.append(("p_increase", k))
        for j in range(checked):
            if rep.thresholds[k - 1][j] > rep.thresholds[k - 2][j]:
                rep.failures.append((f"threshold{j + 1}_nonincrease", k))
    if case is ProblemCase.BEST2:
        for k, (d1, d2) in enumerate(rep.thresholds, 1):
            if d1 > d2:
                rep.failures.append(("d1_le_d2", k))
    if case is ProblemCase.TWO_CHOICE:
        for k in range(1, n + 1):
            if 2 * k >= n and abs(rep.p_win[k - 1] - 1.0) > TIE_TOL:
                rep.failures.append(("saturation", k))
    return rep

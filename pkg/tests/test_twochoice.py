import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from slidewin import best1, twochoice
from slidewin.best1 import cumulative_stop
from slidewin.core import InputError, prefix_order
from slidewin.optimize import monotonicity_report, optimal_best1, optimal_twochoice


@pytest.mark.parametrize("n", range(1, 8))
def test_matches_oracle(oracle, n):
    for k in range(1, n + 1):
        tail = best1.win_probability_table(n, k)
        for (delta1, delta2), want in oracle("twochoice", n, k).items():
            assert twochoice.win_probability(n, k, delta1, delta2) == pytest.approx(float(want), abs=1e-12)
            assert twochoice.win_probability_exact(n, k, delta1, delta2) == want
        for delta1 in range(n):
            for delta2, v in twochoice.win_probability_row(n, k, delta1, tail).items():
                assert v == pytest.approx(float(oracle("twochoice", n, k)[(delta1, delta2)]), abs=1e-12)


def _sigma3(n, k, delta1, delta2, shift):
    """Third term with the gap argument shifted back by ``shift`` positions."""
    S1 = cumulative_stop(n, k, delta1)
    total = 0.0
    for m in range(max(delta1 + 1, delta2 - k + 2), n + 1):
        anchor = m + k - 1
        if anchor >= n:
            continue
        Sa = cumulative_stop(n, k, anchor)
        for j in range(anchor + 1, n + 1):
            b = j - shift
            quiet = 1.0 - (Sa[b - k] if b - k > anchor else 0.0)
            total += (S1[m] - S1[m - 1]) * quiet / n
    return total


def test_sigma3_transcriptions(oracle):
    """The gap argument ``a`` fits the enumeration; ``a - K + 1`` does not."""
    shifted_bad = 0
    for n in range(2, 8):
        for k in range(1, n + 1):
            for (delta1, delta2), want in oracle("twochoice", n, k).items():
                rec = twochoice.TwoChoiceRecursion(n, k, delta1, delta2)
                s1, s2, s3 = rec.sigmas()
                assert _sigma3(n, k, delta1, delta2, 0) == pytest.approx(s3, abs=1e-12)
                alt = s1 + s2 + _sigma3(n, k, delta1, delta2, k - 1)
                shifted_bad += abs(alt - float(want)) > 1e-9
    assert shifted_bad > 0


def test_helper_examples():
    assert twochoice.f2(10, 3, 4, 4) == 0
    assert twochoice.f2(10, 3, 0, 1) == pytest.approx(1 / 3)
    assert twochoice.c_stop(10, 3, 2, 2) == 0
    assert twochoice.c_stop(10, 3, 1, 0) == pytest.approx(twochoice.f2(10, 3, 0, 1))
    assert twochoice.g_gap(10, 3, 2, 0, 4) == 0  # b = m + K - 1 shares m's block
    with pytest.raises(InputError):
        twochoice.f2(10, 3, 0, 11)
    with pytest.raises(InputError):
        twochoice.g_gap(10, 3, 2, 2, 6)


def _first_candidate(perm, best, n, k, after):
    for i in range(after + 1, n + 1):
        if perm[i - 1] == best[min(i + k - 1, n)]:
            return i
    return None


@pytest.mark.parametrize("n,k", [(6, 1), (6, 2), (7, 2), (7, 3)])
def test_g_gap_joint_events(n, k):
    """g(m, x, b): first candidate after x at m and none in (m+K-1, b-K]."""
    for x in range(0, n - 1):
        counts = {}
        for perm in itertools.permutations(range(1, n + 1)):
            best, _, _ = prefix_order(perm)
            m = _first_candidate(perm, best, n, k, x)
            if m is None:
                continue
            nxt = _first_candidate(perm, best, n, k, m + k - 1)
            for b in range(m + k, n + 1):
                if nxt is None or nxt > b - k:
                    counts[(m, b)] = counts.get((m, b), 0) + 1
        total = math.factorial(n)
        for m in range(x + 1, n + 1):
            for b in range(m, n + 1):
                want = Fraction(counts.get((m, b), 0), total)
                assert twochoice.g_gap(n, k, m, x, b) == pytest.approx(float(want), abs=1e-12)


def test_early_choice_probability():
    n, k = 12, 3
    S = cumulative_stop(n, k, 2)
    assert twochoice.early_choice_probability(n, k, 2, 8) == pytest.approx(S[6])
    assert twochoice.early_choice_probability(n, k, 2, 4) == 0.0  # delta2-K+1 <= delta1
    rec = twochoice.TwoChoiceRecursion(n, k, 2, 8)
    assert rec.p_b() == pytest.approx(S[6])


def test_certainty_region():
    assert twochoice.win_probability(10, 5, 0, 5) == 1.0
    for n in range(1, 21):
        for k in range(1, n + 1):
            if 2 * k >= n:
                delta2 = min(k, n - 1)
                assert twochoice.win_probability_exact(n, k, 0, delta2) == 1
                assert twochoice.win_probability(n, k, 0, delta2) == pytest.approx(1.0, abs=4 * np.finfo(float).eps)


def test_gilbert_mosteller_point():
    n = 10_000
    p = twochoice.win_probability(n, 1, round(n / math.exp(1.5)), round(n / math.e))
    assert p == pytest.approx(math.exp(-1) + math.exp(-1.5), abs=1e-3)


def test_asymptotic():
    for w in (0.5, 0.7, 1.0):
        assert twochoice.asymptotic_win_probability(w, 0.0, w if w < 1 else 0.99) == pytest.approx(1.0, abs=1e-12)
    assert twochoice.asymptotic_win_probability(0.0, math.exp(-1.5), math.exp(-1), n_eff=20_000) == pytest.approx(
        math.exp(-1) + math.exp(-1.5), abs=1e-3)
    with pytest.raises(InputError):
        twochoice.asymptotic_win_probability(0.3, 0.2, 0.3)


def test_invalid_thresholds():
    with pytest.raises(InputError):
        twochoice.win_probability(10, 3, 2, 4)


@pytest.mark.parametrize("n", range(1, 17))
def test_optimal_structure(n):
    rep = monotonicity_report("twochoice", n)
    assert rep.passed, rep.failures
    for k in range(1, n + 1):
        res = optimal_twochoice(n, k)
        assert res.p_win >= optimal_best1(n, k).p_win - 1e-12
        if 2 * k >= n and k < n:
            assert (0, k) in res.thresholds

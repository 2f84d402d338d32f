import math
from fractions import Fraction
from functools import lru_cache

import pytest

from slidewin.core import ProblemCase, ProblemSpec, feasible_policies
from slidewin.oracle import exact_win_counts


@lru_cache(maxsize=None)
def oracle_values(case: str, n: int, k: int) -> dict:
    """Exact win probability of every feasible policy, keyed by thresholds."""
    case = ProblemCase.parse(case)
    pols = feasible_policies(case, n, k)
    counts = exact_win_counts(ProblemSpec(n, k, case), pols, workers=1)
    total = math.factorial(n)
    return {p.thresholds: Fraction(c, total) for p, c in zip(pols, counts)}


@pytest.fixture(scope="session")
def oracle():
    return oracle_values

"""Problem model and the sliding-rule policy engine.

A rank sequence is a permutation of 1..N indexed by interview position
(1-based); rank 1 is the best applicant. When the window front sits at
position ``i`` the interviewer has seen positions ``1..min(i+K-1, N)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence


class SlidewinError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SlidewinError, ValueError):
    """Malformed or out-of-range input."""


class DomainError(SlidewinError, ValueError):
    """Input outside the domain where a formula holds."""


class ResourceError(SlidewinError, RuntimeError):
    """Request would exceed the enumeration or scan budget."""


class ProblemCase(str, enum.Enum):
    BEST1 = "best1"
    BEST2 = "best2"
    TWO_CHOICE = "twochoice"

    @classmethod
    def parse(cls, value: "str | ProblemCase") -> "ProblemCase":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        for member in cls:
            if member.value == key:
                return member
        raise InputError(f"unknown problem case {value!r}")


class CandidateClass(enum.IntEnum):
    NOT_CANDIDATE = 0
    CANDIDATE1 = 1
    CANDIDATE2 = 2


@dataclass(frozen=True)
class ProblemSpec:
    n: int
    k: int
    case: ProblemCase = ProblemCase.BEST1

    def __post_init__(self):
        object.__setattr__(self, "case", ProblemCase.parse(self.case))
        check_window(self.n, self.k)


def check_window(n: int, k: int) -> None:
    if not isinstance(n, int) or not isinstance(k, int):
        raise InputError("n and k must be integers")
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    if not 1 <= k <= n:
        raise InputError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")


@dataclass(frozen=True)
class Policy:
    """Threshold parameters of a sliding-rule strategy.

    Use the :meth:`best1`, :meth:`best2` and :meth:`two_choice`
    constructors; only the fields belonging to ``case`` are set.
    """

    case: ProblemCase
    d: int | None = None
    d1: int | None = None
    d2: int | None = None
    delta1: int | None = None
    delta2: int | None = None

    @classmethod
    def best1(cls, d: int) -> "Policy":
        return cls(ProblemCase.BEST1, d=d)

    @classmethod
    def best2(cls, d1: int, d2: int) -> "Policy":
        return cls(ProblemCase.BEST2, d1=d1, d2=d2)

    @classmethod
    def two_choice(cls, delta1: int, delta2: int) -> "Policy":
        return cls(ProblemCase.TWO_CHOICE, delta1=delta1, delta2=delta2)

    @classmethod
    def from_thresholds(cls, case, thresholds: Sequence[int]) -> "Policy":
        case = ProblemCase.parse(case)
        thresholds = [int(t) for t in thresholds]
        expected = 1 if case is ProblemCase.BEST1 else 2
        if len(thresholds) != expected:
            raise InputError(f"{case.value} needs {expected} threshold(s), got {len(thresholds)}")
        if case is ProblemCase.BEST1:
            return cls.best1(*thresholds)
        if case is ProblemCase.BEST2:
            return cls.best2(*thresholds)
        return cls.two_choice(*thresholds)

    @property
    def thresholds(self) -> tuple[int, ...]:
        if self.case is ProblemCase.BEST1:
            return (self.d,)
        if self.case is ProblemCase.BEST2:
            return (self.d1, self.d2)
        return (self.delta1, self.delta2)

    def validate(self, spec: ProblemSpec) -> None:
        if self.case is not spec.case:
            raise InputError(f"policy is for {self.case.value}, problem is {spec.case.value}")
        check_thresholds(spec.case, spec.n, spec.k, self.thresholds)


def check_thresholds(case: ProblemCase, n: int, k: int, thresholds: Sequence[int]) -> None:
    for t in thresholds:
        if not isinstance(t, int) or isinstance(t, bool):
            raise InputError(f"thresholds must be integers, got {t!r}")
        if not 0 <= t <= n - 1:
            raise InputError(f"threshold {t} outside [0, {n - 1}]")
    if case is ProblemCase.BEST2:
        d1, d2 = thresholds
        if d1 > d2:
            raise InputError(f"best2 needs d1 <= d2, got d1={d1}, d2={d2}")
    elif case is ProblemCase.TWO_CHOICE:
        delta1, delta2 = thresholds
        if delta1 + k <= n - 1:
            if delta2 < delta1 + k:
                raise InputError(
                    f"twochoice needs delta2 >= delta1 + k, got delta1={delta1}, "
                    f"delta2={delta2}, k={k}")
        elif delta2 != n - 1:
            raise InputError(
                f"twochoice with delta1 + k > n - 1 takes delta2 = n - 1, got {delta2}")


def feasible_policies(case, n: int, k: int) -> list[Policy]:
    """Every valid policy for ``(case, n, k)``, in lexicographic threshold order."""
    case = ProblemCase.parse(case)
    if case is ProblemCase.BEST1:
        return [Policy.best1(d) for d in range(n)]
    if case is ProblemCase.BEST2:
        return [Policy.best2(d1, d2) for d1 in range(n) for d2 in range(d1, n)]
    out = []
    for delta1 in range(n):
        if delta1 + k <= n - 1:
            out.extend(Policy.two_choice(delta1, delta2) for delta2 in range(delta1 + k, n))
        else:
            out.append(Policy.two_choice(delta1, n - 1))
    return out


@dataclass(frozen=True)
class Outcome:
    chosen: tuple[int, ...] = field(default_factory=tuple)
    win: bool = False


def check_sequence(seq: Sequence[int]) -> tuple[int, ...]:
    ranks = tuple(seq)
    if not ranks:
        raise InputError("rank sequence is empty")
    if sorted(ranks) != list(range(1, len(ranks) + 1)):
        raise InputError(f"rank sequence is not a permutation of 1..{len(ranks)}")
    return ranks


def prefix_order(ranks: Sequence[int]):
    """Best rank, its position and second-best rank of every prefix."""
    n = len(ranks)
    best = [0] * (n + 1)
    best_pos = [0] * (n + 1)
    second = [0] * (n + 1)
    b, bp, s = n + 1, 0, n + 1
    for pos, r in enumerate(ranks, 1):
        if r < b:
            b, bp, s = r, pos, b
        elif r < s:
            s = r
        best[pos], best_pos[pos], second[pos] = b, bp, s
    return best, best_pos, second


def classify_candidate(seq: Sequence[int], i: int, k: int, case=ProblemCase.BEST1) -> CandidateClass:
    """Classify position ``i`` against everything seen while it fronts the window."""
    ranks = check_sequence(seq)
    case = ProblemCase.parse(case)
    n = len(ranks)
    if not 1 <= i <= n:
        raise InputError(f"index {i} outside [1, {n}]")
    if not 1 <= k <= n:
        raise InputError(f"window {k} outside [1, {n}]")
    seen = sorted(ranks[: min(i + k - 1, n)])
    r = ranks[i - 1]
    if r == seen[0]:
        return CandidateClass.CANDIDATE1
    if case is ProblemCase.BEST2 and len(seen) > 1 and r == seen[1]:
        return CandidateClass.CANDIDATE2
    return CandidateClass.NOT_CANDIDATE


def run_policy(seq: Sequence[int], spec: ProblemSpec, pol: Policy) -> Outcome:
    """Execute a threshold policy with the sliding rule on one rank sequence.

    Best-2 accepts a 2-candidate only once no better seen applicant remains
    in the window; while the window's best sits behind the front, the front
    is passed over (it would lose to accepting that later 1-candidate).
    """
    ranks = check_sequence(seq)
    if len(ranks) != spec.n:
        raise InputError(f"sequence length {len(ranks)} != n={spec.n}")
    pol.validate(spec)
    return execute(ranks, spec.n, spec.k, spec.case, pol.thresholds)


def execute(ranks, n, k, case, thresholds, prefix=None) -> Outcome:
    """Unchecked core of :func:`run_policy`; ``prefix`` may carry a cached
    :func:`prefix_order` of ``ranks``."""
    best, best_pos, second = prefix or prefix_order(ranks)

    if case is ProblemCase.BEST1:
        m = _first_candidate(ranks, best, n, k, thresholds[0])
        if m is None:
            return Outcome((), False)
        return Outcome((m,), ranks[m - 1] == 1)

    if case is ProblemCase.BEST2:
        d1, d2 = thresholds
        for i in range(d1 + 1, n + 1):
            seen = min(i + k - 1, n)
            r = ranks[i - 1]
            if r == best[seen]:
                return Outcome((i,), r <= 2)
            if i > d2 and r == second[seen] and best_pos[seen] < i:
                return Outcome((i,), r <= 2)
        return Outcome((), False)

    delta1, delta2 = thresholds
    m1 = _first_candidate(ranks, best, n, k, delta1)
    if m1 is None:
        return Outcome((), False)
    m2 = _first_candidate(ranks, best, n, k, max(m1, delta2))
    chosen = (m1,) if m2 is None else (m1, m2)
    return Outcome(chosen, any(ranks[c - 1] == 1 for c in chosen))


def _first_candidate(ranks, best, n, k, after):
    for i in range(after + 1, n + 1):
        if ranks[i - 1] == best[min(i + k - 1, n)]:
            return i
    return None

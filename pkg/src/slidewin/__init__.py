"""Exact and asymptotic solver for the sliding-window secretary problem."""

from .core import (
    CandidateClass,
    DomainError,
    InputError,
    Outcome,
    Policy,
    ProblemCase,
    ProblemSpec,
    ResourceError,
    SlidewinError,
    classify_candidate,
    run_policy,
)

__all__ = [
    "CandidateClass",
    "DomainError",
    "InputError",
    "Outcome",
    "Policy",
    "ProblemCase",
    "ProblemSpec",
    "ResourceError",
    "SlidewinError",
    "classify_candidate",
    "run_policy",
]

__version__ = "0.1.0"

"""The congruence engine and the named suites built on it."""
from .engine import (
    CoeffSeq,
    CongruenceReport,
    CongruenceSpec,
    InsufficientData,
    Verdict,
    check,
    solve_ap,
    tm_ratios,
    tm_two_term_check,
)

__all__ = [
    "CoeffSeq",
    "CongruenceReport",
    "CongruenceSpec",
    "InsufficientData",
    "Verdict",
    "check",
    "solve_ap",
    "tm_ratios",
    "tm_two_term_check",
]

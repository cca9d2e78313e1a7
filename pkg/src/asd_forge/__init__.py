"""Exact arithmetic for Atkin-Swinnerton-Dyer type congruences.

Series, p-adic rings, modular and hypergeometric generators, formal group
logarithms, and a congruence engine that checks them prime by prime.
"""
from .padic import PadicInt, ZpRing
from .series import PuiseuxSeries
from .asd.engine import CoeffSeq, CongruenceReport, CongruenceSpec, check, solve_ap

__version__ = "0.1.0"

__all__ = [
    "CoeffSeq",
    "CongruenceReport",
    "CongruenceSpec",
    "PadicInt",
    "PuiseuxSeries",
    "ZpRing",
    "check",
    "solve_ap",
]

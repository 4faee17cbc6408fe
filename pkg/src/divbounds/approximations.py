"""Escrowed-dividend baseline: Black-Scholes on spot less the dividend's PV."""

from __future__ import annotations

import math

from .model import DomainError, PricingProblem
from .terminal import bs_call


def black_approx(problem: PricingProblem) -> float:
    adjusted = problem.spot - problem.div_amount * math.exp(-problem.rate * problem.div_time)
    if adjusted <= 0:
        raise DomainError("adjusted spot non-positive")
    return bs_call(adjusted, problem.strike, problem.rate, problem.vol, problem.maturity)

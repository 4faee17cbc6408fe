"""Adaptive choice of S* and M until the price interval is narrow enough."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .bounds import BoundConfig, BoundPair, TangentRule, bound_pair
from .model import PricingProblem

log = logging.getLogger(__name__)

S_STAR_GROWTH = 1.5


@dataclass(frozen=True)
class RefineConfig:
    """Stopping rule and search schedule.

    When ``tolerance`` is at or below one currency unit (``10**-decimals``)
    the loop also insists that lower and upper bound round to the same
    figure, since that is what makes the interval a usable price.
    """

    tolerance: float = 0.01
    m_initial: int = 16
    m_max: int = 1 << 20
    s_star_initial: float | None = None
    plateau_ratio: float = 0.5
    grow_s_star: bool = True
    decimals: int = 2
    tangent: TangentRule = "centered"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.m_initial < 1:
            raise ValueError("m_initial must be >= 1")
        if self.m_max < self.m_initial:
            raise ValueError("m_max must be >= m_initial")
        if not 0 < self.plateau_ratio < 1:
            raise ValueError("plateau_ratio must lie in (0, 1)")
        if self.decimals < 0:
            raise ValueError("decimals must be non-negative")

    @property
    def needs_rounded_agreement(self) -> bool:
        return self.tolerance <= 10.0**-self.decimals


@dataclass(frozen=True)
class Iterate:
    s_star: float
    m: int
    lower: float
    upper: float


@dataclass(frozen=True)
class PriceResult:
    bound_pair: BoundPair
    price: float  # unrounded midpoint of the final interval
    m_used: int
    s_star_used: float
    iterations: int
    converged: bool
    decimals: int = 2
    history: tuple[Iterate, ...] = field(default=(), repr=False)

    @property
    def lower(self) -> float:
        return self.bound_pair.lower

    @property
    def upper(self) -> float:
        return self.bound_pair.upper

    @property
    def epsilon(self) -> float:
        return self.bound_pair.epsilon

    @property
    def display_price(self) -> float:
        return round(self.price, self.decimals)


def default_s_star(problem: PricingProblem) -> float:
    """Twice the point where the asymptote crosses zero: 2 (D + K exp(-r (T - tau)))."""
    return 2.0 * (problem.div_amount + problem.discounted_strike)


def _accept(pair: BoundPair, config: RefineConfig) -> bool:
    if not pair.epsilon < config.tolerance:
        return False
    if config.needs_rounded_agreement:
        return round(pair.lower, config.decimals) == round(pair.upper, config.decimals)
    return True


def price_to_tolerance(problem: PricingProblem, config: RefineConfig = RefineConfig()) -> PriceResult:
    """Double M (and grow S* on stalls) until the interval meets ``config``.

    A stall is a doubling of M that fails to shrink the interval by
    ``plateau_ratio``: the tail pieces beyond S* then dominate, so S* is
    multiplied by 1.5 and M kept.  Running past ``m_max`` returns the last
    interval with ``converged=False``.
    """
    s_star = config.s_star_initial if config.s_star_initial is not None else default_s_star(problem)
    m = config.m_initial
    prev_eps: float | None = None
    history: list[Iterate] = []
    pair: BoundPair | None = None
    converged = False

    while m <= config.m_max:
        pair = bound_pair(problem, BoundConfig(s_star, m, config.tangent))
        history.append(Iterate(s_star, m, pair.lower, pair.upper))
        log.debug("S*=%.6g M=%d lower=%.10g upper=%.10g eps=%.3g", s_star, m, pair.lower, pair.upper, pair.epsilon)
        if _accept(pair, config):
            converged = True
            break
        stalled = prev_eps is not None and pair.epsilon > config.plateau_ratio * prev_eps
        if stalled and config.grow_s_star:
            s_star *= S_STAR_GROWTH
            prev_eps = None
            continue
        prev_eps = pair.epsilon
        m *= 2

    last = history[-1]
    return PriceResult(
        bound_pair=pair,
        price=pair.midpoint,
        m_used=last.m,
        s_star_used=last.s_star,
        iterations=len(history),
        converged=converged,
        decimals=config.decimals,
        history=tuple(history),
    )

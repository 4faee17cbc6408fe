"""Certified price bounds for European calls on a stock paying one cash dividend."""

from .approximations import black_approx
from .bounds import BoundConfig, BoundGrid, BoundPair, bound_pair, build_grid, lower_bound, upper_bound
from .kernel import norm_cdf, norm_pdf
from .model import (
    CallSpec,
    DividendEvent,
    DomainError,
    MarketParams,
    PricingProblem,
    ValidationError,
    validate,
)
from .oracle import McConfig, QuadConfig, QuadratureError, monte_carlo_price, quadrature_estimate, quadrature_price
from .refine import PriceResult, RefineConfig, default_s_star, price_to_tolerance
from .terminal import asymptote, bs_call, value_pre_dividend, value_pre_dividend_derivative

__all__ = [
    "BoundConfig", "BoundGrid", "BoundPair", "CallSpec", "DividendEvent", "DomainError",
    "MarketParams", "McConfig", "PriceResult", "PricingProblem", "QuadConfig", "QuadratureError",
    "RefineConfig", "ValidationError", "asymptote", "black_approx", "bound_pair", "bs_call",
    "build_grid", "default_s_star", "lower_bound", "monte_carlo_price", "norm_cdf", "norm_pdf",
    "price_to_tolerance", "quadrature_estimate", "quadrature_price", "upper_bound", "validate",
    "value_pre_dividend", "value_pre_dividend_derivative",
]

"""Option values at the dividend date.

Just after the dividend the call is a plain Black-Scholes call with
``T - tau`` to run.  Continuity of the option value across the payment
date gives the pre-dividend value as the same call evaluated at the
shifted spot ``S- - D``.
"""

from __future__ import annotations

import math

import numpy as np

from .kernel import SQRT_2PI, _scalar_or_array, norm_cdf
from .model import DomainError, PricingProblem


def _call_on_shifted(y: np.ndarray, kd: float, v: float) -> np.ndarray:
    """Black-Scholes call with positive spot ``y``, discounted strike ``kd``
    and total volatility ``v = sigma sqrt(ttm)``.

    In the money the value is written as forward intrinsic plus put (parity),
    so the nearly linear part is never formed by differencing two large
    products.
    """
    d1 = (np.log(y) - math.log(kd)) / v + 0.5 * v
    d2 = d1 - v
    otm = y * norm_cdf(d1) - kd * norm_cdf(d2)
    put = kd * norm_cdf(-d2) - y * norm_cdf(-d1)
    itm = (y - kd) + np.maximum(put, 0.0)
    return np.maximum(np.where(d1 > 0.0, itm, otm), 0.0)


def bs_call(s, strike: float, rate: float, vol: float, ttm: float):
    """Black-Scholes price of a European call (no dividends).

    ``s`` may be a scalar or an array of spot prices.
    """
    sa = np.asarray(s, dtype=float)
    if np.any(sa <= 0) or strike <= 0 or vol <= 0 or ttm <= 0:
        raise DomainError("bs_call needs positive spot, strike, volatility and time to expiry")
    kd = strike * math.exp(-rate * ttm)
    out = _call_on_shifted(sa, kd, vol * math.sqrt(ttm))
    return _scalar_or_array(out, s)


def value_pre_dividend(s_minus, problem: PricingProblem):
    """Option value at the dividend date as a function of the cum-dividend spot.

    Zero when ``s_minus <= D`` (the stock would go to zero or below).
    Accepts scalars or arrays.
    """
    sa = np.asarray(s_minus, dtype=float)
    y = sa - problem.div_amount
    live = y > 0
    out = np.zeros_like(y)
    if np.any(live):
        v = problem.vol * math.sqrt(problem.residual_time)
        out[live] = _call_on_shifted(y[live], problem.discounted_strike, v)
    return _scalar_or_array(out, s_minus)


def value_pre_dividend_derivative(s_minus, problem: PricingProblem):
    """dV/dS- at the dividend date, for ``s_minus > D``.

    Uses the closed form
    ``N(d) + phi(d)/v - K' phi(d - v) / (v (S- - D))``
    with ``v = sigma sqrt(T - tau)`` and ``K' = K exp(-r (T - tau))``.
    """
    sa = np.asarray(s_minus, dtype=float)
    y = sa - problem.div_amount
    if np.any(~(y > 0)):
        raise DomainError("derivative requires s_minus > dividend amount")
    h = problem.residual_time
    v = problem.vol * math.sqrt(h)
    kd = problem.discounted_strike
    d = (np.log(y) - math.log(problem.strike) + (problem.rate + 0.5 * problem.vol**2) * h) / v
    scale = problem.vol * SQRT_2PI * math.sqrt(h)
    n_d = norm_cdf(d)
    out = n_d + np.exp(-0.5 * d * d) / scale - kd * np.exp(-0.5 * (d - v) ** 2) / (scale * y)
    # the two Gaussian terms cancel exactly; once N(d) underflows only residue is left
    out = np.where(n_d == 0.0, 0.0, np.clip(out, 0.0, 1.0))
    return _scalar_or_array(out, s_minus)


def asymptote(s_minus, problem: PricingProblem):
    """The line (S- - D) - K exp(-r (T - tau)); V approaches it from above."""
    sa = np.asarray(s_minus, dtype=float)
    out = (sa - problem.div_amount) - problem.discounted_strike
    return _scalar_or_array(out, s_minus)

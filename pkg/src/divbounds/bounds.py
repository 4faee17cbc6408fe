"""Piecewise-linear bounds on the dividend-date value and their closed-form
propagation back to t = 0.

The pre-dividend value V(S-, tau) is convex in S-.  On a uniform grid
``S_i = D + i dS`` over ``[D, S*]`` chords lie above it and tangents lie
below it.  Beyond ``S*`` the unit-slope chord from ``(S*, V(S*))`` bounds
it from above and the asymptote ``(S- - D) - K'`` from below.  Each linear
piece ``a S- + b`` restricted to ``[lo, hi]`` has an exact lognormal
expectation, so discounting the bounding functions gives a sum of
Black-Scholes type terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .kernel import norm_cdf
from .model import DomainError, PricingProblem
from .terminal import value_pre_dividend, value_pre_dividend_derivative

TangentRule = Literal["forward", "centered"]

# Stand-in for log(0) when the grid starts at S_0 = D = 0.
_TINY = 1e-12


@dataclass(frozen=True)
class BoundConfig:
    """Grid parameters.

    ``tangent`` picks where the tangent for cell ``[S_{i-1}, S_i]`` touches:
    ``"centered"`` uses the cell midpoint ``D + (i - 1/2) dS``;
    ``"forward"`` uses ``D + (i + 1/2) dS``, the midpoint of the next cell,
    which is the indexing behind the published reference table and gives a
    looser lower bound.  Both are valid because V is convex.
    """

    s_star: float
    m: int
    tangent: TangentRule = "centered"


@dataclass(frozen=True)
class BoundGrid:
    s_star: float
    m: int
    nodes: np.ndarray
    node_values: np.ndarray
    midpoints: np.ndarray  # tangent points, one per cell
    midpoint_values: np.ndarray
    midpoint_derivatives: np.ndarray
    chord_slopes: np.ndarray

    @property
    def step(self) -> float:
        return (self.s_star - self.nodes[0]) / self.m

    def upper_function(self, s_minus):
        """Piecewise-linear majorant of V(S-, tau) (chords, then unit slope)."""
        s = np.asarray(s_minus, dtype=float)
        idx = np.clip(np.searchsorted(self.nodes, s, side="right") - 1, 0, self.m - 1)
        inside = self.node_values[idx] + self.chord_slopes[idx] * (s - self.nodes[idx])
        tail = (s - self.s_star) + self.node_values[-1]
        out = np.where(s >= self.s_star, tail, inside)
        return np.where(s <= self.nodes[0], 0.0, out)

    def lower_function(self, s_minus, problem: PricingProblem):
        """Piecewise-linear minorant of V(S-, tau) (tangents, then asymptote)."""
        s = np.asarray(s_minus, dtype=float)
        idx = np.clip(np.searchsorted(self.nodes, s, side="right") - 1, 0, self.m - 1)
        inside = self.midpoint_values[idx] + self.midpoint_derivatives[idx] * (s - self.midpoints[idx])
        tail = (s - problem.div_amount) - problem.discounted_strike
        out = np.where(s >= self.s_star, tail, inside)
        return np.where(s <= self.nodes[0], 0.0, out)


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float

    @property
    def epsilon(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


def _check_config(problem: PricingProblem, config: BoundConfig) -> None:
    if not config.s_star > problem.div_amount:
        raise DomainError(f"s_star={config.s_star} must exceed the dividend {problem.div_amount}")
    if int(config.m) != config.m or config.m < 1:
        raise DomainError(f"m must be a positive integer, got {config.m}")
    if config.tangent not in ("forward", "centered"):
        raise DomainError(f"unknown tangent rule {config.tangent!r}")


def build_grid(problem: PricingProblem, config: BoundConfig) -> BoundGrid:
    _check_config(problem, config)
    d, s_star, m = problem.div_amount, float(config.s_star), int(config.m)
    step = (s_star - d) / m
    i = np.arange(m + 1, dtype=float)
    nodes = d + i * step
    nodes[-1] = s_star
    node_values = value_pre_dividend(nodes, problem)
    node_values[0] = 0.0
    offset = 0.5 if config.tangent == "forward" else -0.5
    midpoints = d + (i[1:] + offset) * step
    return BoundGrid(
        s_star=s_star,
        m=m,
        nodes=nodes,
        node_values=node_values,
        midpoints=midpoints,
        midpoint_values=value_pre_dividend(midpoints, problem),
        midpoint_derivatives=value_pre_dividend_derivative(midpoints, problem),
        chord_slopes=np.diff(node_values) / step,
    )


def _cell_weights(problem: PricingProblem, grid: BoundGrid):
    """Per-cell weights A_i (asset) and B_i (cash), plus the S* tail CDFs.

    For a cell [S_{i-1}, S_i], ``S A_i`` is the discounted expectation of
    S- on the cell and ``exp(-r tau) B_i`` that of the indicator.
    """
    s, r, tau = problem.spot, problem.rate, problem.div_time
    vt = problem.vol * math.sqrt(tau)
    lo_nodes = grid.nodes.copy()
    if lo_nodes[0] <= 0.0:
        lo_nodes[0] = _TINY * problem.strike
    d = (math.log(s) - np.log(lo_nodes) + (r + 0.5 * problem.vol**2) * tau) / vt
    n_asset = norm_cdf(d)
    n_cash = norm_cdf(d - vt)
    a = n_asset[:-1] - n_asset[1:]
    b = n_cash[:-1] - n_cash[1:]
    return a, b, n_asset[-1], n_cash[-1]


def _upper(problem: PricingProblem, grid: BoundGrid, weights) -> float:
    a, b, n_star, n_star_cash = weights
    s, disc = problem.spot, math.exp(-problem.rate * problem.div_time)
    alpha = grid.chord_slopes
    intercept = grid.node_values[:-1] - alpha * grid.nodes[:-1]
    terms = np.concatenate([
        alpha * a * s,
        disc * intercept * b,
        [s * n_star, disc * (grid.node_values[-1] - grid.s_star) * n_star_cash],
    ])
    return max(math.fsum(terms), 0.0)


def _lower(problem: PricingProblem, grid: BoundGrid, weights) -> float:
    a, b, n_star, n_star_cash = weights
    s, disc = problem.spot, math.exp(-problem.rate * problem.div_time)
    slope = grid.midpoint_derivatives
    intercept = grid.midpoint_values - slope * grid.midpoints
    line_root = problem.div_amount + problem.discounted_strike
    terms = np.concatenate([
        s * slope * a,
        disc * intercept * b,
        [s * n_star, -disc * line_root * n_star_cash],
    ])
    # tangents may dip below zero near D; zero is itself a valid bound
    return max(math.fsum(terms), 0.0)


def upper_bound(problem: PricingProblem, grid: BoundGrid) -> float:
    """Time-zero upper bound obtained by pricing the chord majorant."""
    return _upper(problem, grid, _cell_weights(problem, grid))


def lower_bound(problem: PricingProblem, grid: BoundGrid) -> float:
    """Time-zero lower bound obtained by pricing the tangent minorant."""
    return _lower(problem, grid, _cell_weights(problem, grid))


def bound_pair(problem: PricingProblem, config: BoundConfig) -> BoundPair:
    grid = build_grid(problem, config)
    weights = _cell_weights(problem, grid)
    return BoundPair(lower=_lower(problem, grid, weights), upper=_upper(problem, grid, weights))

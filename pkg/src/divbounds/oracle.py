"""Reference prices independent of the bound construction.

``quadrature_price`` integrates the dividend-date value against the
lognormal transition density with adaptive Gauss-Legendre panels.
``monte_carlo_price`` samples the same expectation.  Neither uses the
grid, the chords or the tangents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .kernel import norm_pdf
from .model import PricingProblem
from .terminal import value_pre_dividend

_GL_ORDER = 20
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


class QuadratureError(RuntimeError):
    """The adaptive rule could not reach its target within ``max_panels``."""


@dataclass(frozen=True)
class QuadConfig:
    target_abs_error: float = 1e-8
    max_panels: int = 4096
    truncation_width: float = 12.0  # standard deviations of log(S-) at tau

    def __post_init__(self):
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")
        if self.truncation_width < 8:
            raise ValueError("truncation_width must be at least 8")
        if self.max_panels < 1:
            raise ValueError("max_panels must be positive")


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error: float
    panels: int


@dataclass(frozen=True)
class McConfig:
    paths: int = 1_000_000
    seed: int = 20240101
    block_size: int = 1 << 16

    def __post_init__(self):
        if self.paths < 1:
            raise ValueError("paths must be >= 1")
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")


def _gl_panels(f: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    half = 0.5 * (hi - lo)
    x = (0.5 * (hi + lo))[:, None] + half[:, None] * _GL_NODES[None, :]
    return half * (f(x) @ _GL_WEIGHTS)


def composite_gauss_legendre(f, edges) -> float:
    """Fixed composite 20-point Gauss-Legendre rule over the given panel edges."""
    edges = np.asarray(edges, dtype=float)
    return math.fsum(_gl_panels(f, edges[:-1], edges[1:]))


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float,
    max_panels: int = 4096,
    initial_panels: int = 8,
) -> QuadResult:
    """Integrate a vectorised ``f`` over ``[a, b]`` to absolute error ``tol``.

    Each panel is compared against its two halves; panels whose
    discrepancy exceeds their length-weighted share of ``tol`` are bisected.
    The reported error is the sum of accepted discrepancies, which is
    pessimistic for the (much more accurate) halved values actually used.
    """
    if not b > a:
        return QuadResult(0.0, 0.0, 0)
    edges = np.linspace(a, b, initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    values: list[np.ndarray] = []
    errors: list[np.ndarray] = []
    accepted = 0
    while lo.size:
        if accepted + lo.size > max_panels:
            raise QuadratureError(
                f"target {tol:g} not reached within {max_panels} panels"
            )
        mid = 0.5 * (lo + hi)
        whole = _gl_panels(f, lo, hi)
        halves = _gl_panels(f, lo, mid) + _gl_panels(f, mid, hi)
        err = np.abs(halves - whole)
        ok = err <= tol * (hi - lo) / (b - a)
        values.append(halves[ok])
        errors.append(err[ok])
        accepted += int(ok.sum())
        bad = ~ok
        lo, hi = np.concatenate([lo[bad], mid[bad]]), np.concatenate([mid[bad], hi[bad]])
    return QuadResult(
        value=math.fsum(np.concatenate(values)),
        abs_error=math.fsum(np.concatenate(errors)),
        panels=accepted,
    )


def quadrature_estimate(problem: PricingProblem, config: QuadConfig = QuadConfig()) -> QuadResult:
    """Discounted expectation of V(S-(tau), tau) by adaptive quadrature.

    Integrates over the standardised log-price ``z``, with
    ``S-(tau) = S exp((r - sigma^2/2) tau + sigma sqrt(tau) z)``, truncated
    to ``|z| <= truncation_width`` and starting at the kink ``S- = D``
    (the integrand vanishes below it).
    """
    tau = problem.div_time
    vt = problem.vol * math.sqrt(tau)
    x = math.log(problem.spot) + (problem.rate - 0.5 * problem.vol**2) * tau
    width = config.truncation_width
    z_lo = -width
    if problem.div_amount > 0:
        z_lo = max(z_lo, (math.log(problem.div_amount) - x) / vt)
    if z_lo >= width:
        return QuadResult(0.0, 0.0, 0)

    disc = math.exp(-problem.rate * tau)

    def integrand(z):
        return disc * value_pre_dividend(np.exp(x + vt * z), problem) * norm_pdf(z)

    return adaptive_gauss_legendre(integrand, z_lo, width, config.target_abs_error, config.max_panels)


def quadrature_price(problem: PricingProblem, config: QuadConfig = QuadConfig()) -> float:
    """Reference time-zero price; raises QuadratureError if the target is missed."""
    return quadrature_estimate(problem, config).value


def _uniforms(bitgen: np.random.BitGenerator, n: int) -> np.ndarray:
    # 53-bit lattice shifted off zero, so ndtri never sees 0 or 1
    raw = np.random.Generator(bitgen).integers(0, 1 << 53, size=n, dtype=np.int64, endpoint=False)
    return (raw.astype(float) + 0.5) * 2.0**-53


def monte_carlo_price(problem: PricingProblem, config: McConfig = McConfig()) -> tuple[float, float]:
    """Plain Monte Carlo estimate and its standard error.

    Normals come from inverse-CDF transforms of a counter-based (Philox)
    stream; block ``k`` uses the stream jumped ``k`` times, so blocks are
    independent of one another and of evaluation order.  Block statistics
    are merged in index order.  Standard error is NaN for a single path.
    """
    tau = problem.div_time
    vt = problem.vol * math.sqrt(tau)
    drift = (problem.rate - 0.5 * problem.vol**2) * tau
    disc = math.exp(-problem.rate * tau)
    base = np.random.Philox(config.seed)

    count, mean, m2 = 0, 0.0, 0.0
    for k, start in enumerate(range(0, config.paths, config.block_size)):
        n = min(config.block_size, config.paths - start)
        z = special.ndtri(_uniforms(base.jumped(k), n))
        payoff = disc * value_pre_dividend(problem.spot * np.exp(drift + vt * z), problem)
        b_mean = float(payoff.mean())
        b_m2 = float(((payoff - b_mean) ** 2).sum())
        # Chan et al. pairwise merge
        total = count + n
        delta = b_mean - mean
        mean += delta * n / total
        m2 += b_m2 + delta * delta * count * n / total
        count = total

    if count < 2:
        return mean, math.nan
    return mean, math.sqrt(m2 / (count - 1) / count)

"""Standard normal CDF/PDF used throughout the pricing formulas."""

from __future__ import annotations

import math

import numpy as np
from scipy import special

SQRT_2PI = math.sqrt(2.0 * math.pi)

# Beyond this the CDF is 0/1 to double precision; saturating avoids denormals.
CDF_SATURATION = 40.0


def _scalar_or_array(out: np.ndarray, like):
    if np.ndim(like) == 0:
        return float(out)
    return out


def norm_cdf(x):
    """Standard normal CDF, scalar or array.

    Evaluated through the complementary error function, so the lower tail
    keeps full relative accuracy. NaN propagates.
    """
    xa = np.asarray(x, dtype=float)
    out = special.ndtr(xa)
    out = np.where(xa > CDF_SATURATION, 1.0, out)
    out = np.where(xa < -CDF_SATURATION, 0.0, out)
    return _scalar_or_array(out, x)


def norm_pdf(x):
    """Standard normal density exp(-x^2/2)/sqrt(2 pi)."""
    xa = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * xa * xa) / SQRT_2PI
    return _scalar_or_array(out, x)

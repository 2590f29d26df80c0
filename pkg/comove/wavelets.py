"""
Non-decimated (a trous) Haar wavelet decomposition.

Level j smooths with holes of 2^(j-1) samples:

    c_j(t) = (c_{j-1}(t) + c_{j-1}(t - 2^(j-1))) / 2,   c_0 = x
    d_j(t) = c_{j-1}(t) - c_j(t)

so every level keeps the full length N and x = c_J + sum_j d_j exactly.
"""
import logging
import math
from typing import Union

import numpy as np
import pandas as pd

from .exceptions import ArgumentError
from .models import BoundaryRule, ScaleDecomposition

logger = logging.getLogger(__name__)

DEFAULT_LEVELS = 7


def max_levels(n: int) -> int:
    """Largest J with 2^J <= n."""
    return int(math.floor(math.log2(n))) if n >= 1 else 0


def _lagged(c: np.ndarray, shift: int, boundary: BoundaryRule) -> np.ndarray:
    """c(t - shift) with the boundary rule applied for t < shift."""
    idx = np.arange(c.size) - shift
    if boundary is BoundaryRule.PERIODIC:
        idx %= c.size
    else:
        # half-sample reflection: c(-1) = c(0), c(-2) = c(1), ...
        idx = np.where(idx < 0, -idx - 1, idx)
    return c[idx]


def haar_atrous_decompose(
    x, J: int = DEFAULT_LEVELS, boundary: Union[BoundaryRule, str] = BoundaryRule.SYMMETRIC
) -> ScaleDecomposition:
    """Decompose x into J detail series and one smooth series.

    Args:
        x: Real series of length N
        J: Number of dyadic levels; scale j spans 2^j to 2^(j+1) samples
        boundary: 'symmetric' (reflection) or 'periodic'

    Returns:
        ScaleDecomposition

    Raises:
        ArgumentError: If J < 1 or N < 2^J
    """
    x = np.asarray(x, dtype=float).ravel()
    boundary = BoundaryRule(boundary)
    if J < 1:
        raise ArgumentError(f"J must be at least 1, got {J}")
    if x.size < 2 ** J:
        raise ArgumentError(
            f"N={x.size} is too short for J={J}; the maximum feasible J is {max_levels(x.size)}"
        )
    details = np.empty((J, x.size))
    c_prev = x
    for j in range(1, J + 1):
        c_next = 0.5 * (c_prev + _lagged(c_prev, 2 ** (j - 1), boundary))
        details[j - 1] = c_prev - c_next
        c_prev = c_next
    return ScaleDecomposition(details=details, smooth=c_prev, J=J, boundary_rule=boundary)


def reconstruct(decomposition: ScaleDecomposition) -> np.ndarray:
    """Sum of the smooth and every detail series."""
    return decomposition.smooth + decomposition.details.sum(axis=0)


def decomposition_frame(decomposition: ScaleDecomposition) -> pd.DataFrame:
    """N x (J + 1) table with columns d1..dJ, smooth."""
    data = {f"d{j}": decomposition.detail(j) for j in range(1, decomposition.J + 1)}
    data["smooth"] = decomposition.smooth
    return pd.DataFrame(data)


def detail_energy(decomposition: ScaleDecomposition) -> np.ndarray:
    """Sum of squared coefficients per detail level."""
    return np.sum(decomposition.details ** 2, axis=1)

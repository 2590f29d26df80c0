"""
Johansen trace test (unrestricted constant, linear trend in the data) and
portfolio construction from a cointegrating vector.
"""
import logging
from typing import Dict, Sequence

import numpy as np
from scipy import linalg

from .exceptions import ArgumentError, NumericalRankError, SampleSizeError, UnsupportedSpecError
from .models import AlignedPanel, JohansenReport
from .utils.regression import add_constant, lagmat, ols

logger = logging.getLogger(__name__)

LINEAR_TREND = "linear"

# Trace test, linear trend in the data, indexed by K - r.
TRACE_CRITICAL_VALUES: Dict[int, Dict[str, float]] = {
    1: {"10%": 6.50, "5%": 8.18, "1%": 11.65},
    2: {"10%": 15.66, "5%": 17.95, "1%": 23.52},
    3: {"10%": 28.71, "5%": 31.52, "1%": 37.22},
    4: {"10%": 45.23, "5%": 48.28, "1%": 55.43},
    5: {"10%": 66.49, "5%": 70.60, "1%": 78.87},
}


def _residuals(Z: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Columns of Z purged of W by least squares."""
    return np.column_stack([ols(Z[:, i], W).residuals for i in range(Z.shape[1])])


def johansen_trace(
    panel: AlignedPanel, lag_order: int = 2, trend: str = LINEAR_TREND
) -> JohansenReport:
    """Johansen trace test on the panel columns.

    Args:
        panel: Panel whose columns (in order) form the system
        lag_order: Order of the VAR in levels; the VECM carries lag_order - 1
            lagged differences
        trend: Only 'linear' (unrestricted constant) is supported

    Returns:
        JohansenReport with eigenvectors normalised so their first row is 1

    Raises:
        ArgumentError: If lag_order < 1 or K < 2
        UnsupportedSpecError: For other trend specifications or K > 5
        SampleSizeError: If N <= K * lag_order + 10
        NumericalRankError: If a moment matrix is singular
    """
    if trend != LINEAR_TREND:
        raise UnsupportedSpecError(f"Only the '{LINEAR_TREND}' trend specification is supported")
    if lag_order < 1:
        raise ArgumentError(f"lag_order must be at least 1, got {lag_order}")
    Y = panel.matrix()
    n, k = Y.shape
    if k < 2:
        raise ArgumentError(f"Johansen test needs at least 2 variables, got {k}")
    if k > max(TRACE_CRITICAL_VALUES):
        raise UnsupportedSpecError(f"No trace critical values embedded for K={k}")
    if n <= k * lag_order + 10:
        raise SampleSizeError(f"Johansen test needs N > {k * lag_order + 10}, got {n}")

    dY = np.diff(Y, axis=0)
    start = lag_order - 1
    z0 = dY[start:]
    z1 = Y[start:-1]
    t_eff = z0.shape[0]
    if start:
        lagged = np.column_stack([lagmat(dY[:, i], start) for i in range(k)])
    else:
        lagged = np.empty((t_eff, 0))
    W = add_constant(lagged)

    r0 = _residuals(z0, W)
    r1 = _residuals(z1, W)
    s00 = r0.T @ r0 / t_eff
    s11 = r1.T @ r1 / t_eff
    s01 = r0.T @ r1 / t_eff
    try:
        c00 = linalg.cho_factor(s00)
        linalg.cholesky(s11)
    except linalg.LinAlgError as e:
        raise NumericalRankError(f"Singular moment matrix: {e}") from e

    a = s01.T @ linalg.cho_solve(c00, s01)
    eigvals, eigvecs = linalg.eigh((a + a.T) / 2.0, s11)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, 1.0 - 1e-15)
    eigvecs = eigvecs[:, order]

    first = eigvecs[0, :]
    if np.any(np.abs(first) < 1e-300):
        raise NumericalRankError("Eigenvector with zero first element cannot be normalised")
    normalised = eigvecs / first

    log_terms = np.log1p(-eigvals)
    trace = np.array([-t_eff * log_terms[r:].sum() for r in range(k)])
    critical = {r: dict(TRACE_CRITICAL_VALUES[k - r]) for r in range(k)}
    logger.info(
        "Johansen K=%d lag_order=%d T=%d eigenvalues=%s trace=%s",
        k, lag_order, t_eff, np.round(eigvals, 6).tolist(), np.round(trace, 3).tolist(),
    )
    return JohansenReport(
        eigenvalues=eigvals,
        trace_stats=trace,
        critical_values=critical,
        eigenvectors=normalised,
        lag_order=lag_order,
        variables=tuple(panel.names),
        n_obs=t_eff,
    )


def portfolio_series(panel: AlignedPanel, weights: Sequence[float]) -> np.ndarray:
    """Linear combination s_t = sum_j w_j x_jt of the panel columns.

    Raises:
        ArgumentError: If the number of weights differs from the column count
    """
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != len(panel.names):
        raise ArgumentError(f"Expected {len(panel.names)} weights, got {w.size}")
    return panel.matrix() @ w

"""
Covariance, correlation, OLS with ANOVA summary and the Durbin-Watson statistic.
"""
import logging
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as sps
from statsmodels.stats.stattools import durbin_watson as _sm_durbin_watson

from .exceptions import ArgumentError, SampleSizeError, UndefinedStatisticError
from .models import AlignedPanel, RegressionReport
from .utils.regression import add_constant, ols

logger = logging.getLogger(__name__)

Window = Tuple[int, int]
DEFAULT_WINDOWS: Tuple[Window, ...] = ((0, 200), (200, 700), (700, 1200))


def _pair(x, y) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ArgumentError(f"Length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise ArgumentError(f"At least 2 observations required, got {x.size}")
    return x, y


def covariance(x, y) -> float:
    """Sample covariance with the n - 1 denominator."""
    x, y = _pair(x, y)
    return float(np.dot(x - x.mean(), y - y.mean()) / (x.size - 1))


def pearson(x, y) -> float:
    """Pearson correlation, clamped to [-1, 1].

    Raises:
        UndefinedStatisticError: If either input is constant
    """
    x, y = _pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(dx @ dx)
    sy = np.sqrt(dy @ dy)
    if sx == 0 or sy == 0:
        raise UndefinedStatisticError("Correlation is undefined for a constant series")
    return float(np.clip((dx @ dy) / (sx * sy), -1.0, 1.0))


def windowed_correlations(
    panel: AlignedPanel, windows: Sequence[Window] = DEFAULT_WINDOWS
) -> List[Dict[str, object]]:
    """Pairwise correlations of all panel columns inside each row window.

    Windows are half-open [start, end); an end beyond the panel is capped at N.

    Returns:
        One dict per window with keys 'start', 'end' (after capping) and
        'r_<a>_<b>' for every unordered column pair in panel order

    Raises:
        ArgumentError: If a window starts outside the panel or start >= end
    """
    n = panel.n_obs
    rows: List[Dict[str, object]] = []
    for start, end in windows:
        if start < 0 or start >= end or start >= n:
            raise ArgumentError(f"Window ({start}, {end}) is invalid for {n} rows")
        stop = min(end, n)
        if stop - start < 2:
            raise ArgumentError(f"Window ({start}, {end}) holds fewer than 2 rows")
        if stop != end:
            logger.info("Window (%d, %d) capped at N=%d", start, end, n)
        row: Dict[str, object] = {'start': start, 'end': stop}
        for a, b in combinations(panel.names, 2):
            row[f"r_{a}_{b}"] = pearson(panel.column(a)[start:stop], panel.column(b)[start:stop])
        rows.append(row)
    return rows


def ols_anova(
    y, x, dependent: str = "y", regressors: Optional[Sequence[str]] = None
) -> RegressionReport:
    """Least-squares fit with intercept plus the ANOVA summary.

    Args:
        y: Response of length N
        x: One regressor (length N) or an N x k matrix
        dependent: Label of the response
        regressors: Labels of the regressors

    Returns:
        RegressionReport

    Raises:
        SampleSizeError: If N <= k + 1
        SingularDesignError: If the design is rank deficient
    """
    y = np.asarray(y, dtype=float).ravel()
    X = np.asarray(x, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.size != n:
        raise ArgumentError(f"Response has {y.size} rows, regressors have {n}")
    if n <= k + 1:
        raise SampleSizeError(f"OLS needs more than {k + 1} observations, got {n}")

    fit = ols(y, add_constant(X))
    resid = fit.residuals
    ssr = fit.ssr
    centered = y - y.mean()
    sst = float(centered @ centered)
    df_resid = n - k - 1

    if sst == 0:
        r2 = 1.0 if ssr == 0 else 0.0
    else:
        r2 = float(np.clip(1.0 - ssr / sst, 0.0, 1.0))
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / df_resid
    if ssr <= np.finfo(float).eps * max(sst, 1.0) * n:
        f_stat, f_p = float('inf'), 0.0
    else:
        f_stat = ((sst - ssr) / k) / (ssr / df_resid)
        f_p = float(sps.f.sf(f_stat, k, df_resid))

    se = fit.std_errors()
    with np.errstate(divide='ignore', invalid='ignore'):
        t_values = np.where(se > 0, fit.coef / se, np.inf * np.sign(fit.coef))
    p_values = 2.0 * sps.t.sf(np.abs(t_values), df_resid)

    dw = durbin_watson(resid) if np.any(resid != 0) else 2.0
    labels = tuple(regressors) if regressors is not None else tuple(f"x{i + 1}" for i in range(k))
    logger.debug("OLS %s ~ %s: R2=%.4f F=%.4f", dependent, labels, r2, f_stat)
    return RegressionReport(
        intercept=float(fit.coef[0]),
        coefficients=fit.coef[1:],
        residuals=resid,
        r_squared=r2,
        adj_r_squared=float(adj_r2),
        f_statistic=float(f_stat),
        f_p_value=f_p,
        durbin_watson=float(dw),
        std_errors=se[1:],
        t_values=t_values[1:],
        p_values=p_values[1:],
        regressors=labels,
        dependent=dependent,
    )


def durbin_watson(residuals) -> float:
    """Durbin-Watson statistic sum((e_t - e_{t-1})^2) / sum(e_t^2).

    Raises:
        ArgumentError: If fewer than 2 residuals are given
        UndefinedStatisticError: If all residuals are zero
    """
    e = np.asarray(residuals, dtype=float).ravel()
    if e.size < 2:
        raise ArgumentError(f"Durbin-Watson needs at least 2 residuals, got {e.size}")
    if not np.any(e):
        raise UndefinedStatisticError("Durbin-Watson is undefined for all-zero residuals")
    return float(_sm_durbin_watson(e))

"""
Augmented Dickey-Fuller, Phillips-Perron and KPSS tests.

ADF and PP p-values come from the MacKinnon response surface; KPSS p-values
interpolate the tabulated quantiles of its limiting distribution.
"""
import logging
import math
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
from statsmodels.tsa.adfvalues import mackinnonp

from .exceptions import ArgumentError, SampleSizeError, UnsupportedSpecError
from .models import SIGNIFICANCE_LEVELS, TrendSpec, UnitRootReport, UnitRootTest
from .utils.regression import lagmat, ols

logger = logging.getLogger(__name__)

ADF_CRITICAL_VALUES: Dict[TrendSpec, Dict[str, float]] = {
    TrendSpec.NONE: {"10%": -1.62, "5%": -1.94, "1%": -2.57},
    TrendSpec.CONSTANT: {"10%": -2.57, "5%": -2.86, "1%": -3.44},
    TrendSpec.CONSTANT_AND_LINEAR: {"10%": -3.13, "5%": -3.41, "1%": -3.97},
}

KPSS_CRITICAL_VALUES: Dict[TrendSpec, Dict[str, float]] = {
    TrendSpec.CONSTANT: {"10%": 0.35, "5%": 0.46, "1%": 0.74},
    TrendSpec.CONSTANT_AND_LINEAR: {"10%": 0.12, "5%": 0.15, "1%": 0.22},
}

# Upper-tail quantiles at 10%, 5%, 2.5% and 1%.
_KPSS_QUANTILES: Dict[TrendSpec, Tuple[float, ...]] = {
    TrendSpec.CONSTANT: (0.347, 0.463, 0.574, 0.739),
    TrendSpec.CONSTANT_AND_LINEAR: (0.119, 0.146, 0.176, 0.216),
}
_KPSS_PVALUES = (0.10, 0.05, 0.025, 0.01)

ADF_MIN_EXTRA_OBS = 20
PP_MIN_OBS = 25
KPSS_MIN_OBS = 25


def _as_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise ArgumentError("Series contains non-finite values")
    return x


def default_adf_max_lags(n: int) -> int:
    """Schwert's rule floor(12 (N/100)^(1/4))."""
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def default_bandwidth(n: int) -> int:
    """Newey-West rule floor(4 (N/100)^(2/9))."""
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def _deterministic(trend: TrendSpec, nobs: int) -> np.ndarray:
    cols = []
    if trend in (TrendSpec.CONSTANT, TrendSpec.CONSTANT_AND_LINEAR):
        cols.append(np.ones(nobs))
    if trend is TrendSpec.CONSTANT_AND_LINEAR:
        cols.append(np.arange(1, nobs + 1, dtype=float))
    return np.column_stack(cols) if cols else np.empty((nobs, 0))


def _rejections(statistic: float, critical_values: Mapping[str, float], left_tail: bool) -> Tuple[str, ...]:
    if left_tail:
        return tuple(lv for lv in SIGNIFICANCE_LEVELS if statistic < critical_values[lv])
    return tuple(lv for lv in SIGNIFICANCE_LEVELS if statistic > critical_values[lv])


def _mackinnon_pvalue(statistic: float, trend: TrendSpec) -> float:
    return float(np.clip(mackinnonp(statistic, regression=trend.regression, N=1), 0.0, 1.0))


def long_run_variance(u: np.ndarray, bandwidth: int) -> float:
    """Newey-West estimate with Bartlett weights, no demeaning."""
    n = u.size
    lrv = float(u @ u) / n
    for j in range(1, bandwidth + 1):
        weight = 1.0 - j / (bandwidth + 1.0)
        lrv += 2.0 * weight * float(u[j:] @ u[:-j]) / n
    return lrv


def _adf_design(x: np.ndarray, trend: TrendSpec, lags: int, start: int) -> Tuple[np.ndarray, np.ndarray]:
    """Response and design for the ADF regression using rows t >= start of dy."""
    dy = np.diff(x)
    y = dy[start:]
    nobs = y.size
    level = x[start:-1]
    diffs = lagmat(dy, start)[:, :lags] if lags else np.empty((nobs, 0))
    X = np.column_stack([_deterministic(trend, nobs), level, diffs])
    return y, X


def adf_test(
    x,
    trend: TrendSpec = TrendSpec.CONSTANT,
    max_lags: Optional[int] = None,
    lags: Optional[int] = None,
) -> UnitRootReport:
    """Augmented Dickey-Fuller test of a unit root.

    The lag order minimises the AIC over 0..max_lags on a common sample and the
    chosen model is refitted on every available observation. A fixed `lags`
    skips the search.

    Raises:
        SampleSizeError: If N < 20 + max_lags
        ArgumentError: If a lag argument is negative
    """
    x = _as_vector(x)
    trend = TrendSpec(trend)
    n = x.size
    if max_lags is None:
        max_lags = lags if lags is not None else default_adf_max_lags(n)
    if max_lags < 0 or (lags is not None and lags < 0):
        raise ArgumentError("Lag orders must be non-negative")
    if lags is not None and lags > max_lags:
        max_lags = lags
    if n < ADF_MIN_EXTRA_OBS + max_lags:
        raise SampleSizeError(f"ADF with max_lags={max_lags} needs N >= {ADF_MIN_EXTRA_OBS + max_lags}, got {n}")

    if lags is None:
        best_aic, lags = np.inf, 0
        for p in range(max_lags + 1):
            y, X = _adf_design(x, trend, p, max_lags)
            fit = ols(y, X)
            aic = y.size * math.log(fit.ssr / y.size) + 2.0 * X.shape[1]
            if aic < best_aic - 1e-12:
                best_aic, lags = aic, p
        logger.debug("ADF lag order %d chosen by AIC over 0..%d", lags, max_lags)

    y, X = _adf_design(x, trend, lags, lags)
    fit = ols(y, X)
    gamma_col = trend.n_deterministic
    statistic = float(fit.coef[gamma_col] / fit.std_errors()[gamma_col])
    critical = ADF_CRITICAL_VALUES[trend]
    return UnitRootReport(
        test=UnitRootTest.ADF,
        statistic=statistic,
        p_value=_mackinnon_pvalue(statistic, trend),
        lags=lags,
        trend=trend,
        critical_values=dict(critical),
        reject_at=_rejections(statistic, critical, left_tail=True),
        n_obs=y.size,
    )


def pp_test(x, trend: TrendSpec = TrendSpec.CONSTANT, bandwidth: Optional[int] = None) -> UnitRootReport:
    """Phillips-Perron Z_t test of a unit root.

    Raises:
        SampleSizeError: If N < 25
        ArgumentError: If bandwidth is negative or not below N
    """
    x = _as_vector(x)
    trend = TrendSpec(trend)
    n = x.size
    if n < PP_MIN_OBS:
        raise SampleSizeError(f"PP needs N >= {PP_MIN_OBS}, got {n}")
    bandwidth = default_bandwidth(n) if bandwidth is None else int(bandwidth)
    if not 0 <= bandwidth < n:
        raise ArgumentError(f"bandwidth must be in [0, {n - 1}], got {bandwidth}")

    y = np.diff(x)
    nobs = y.size
    X = np.column_stack([_deterministic(trend, nobs), x[:-1]])
    fit = ols(y, X)
    k = X.shape[1]
    u = fit.residuals
    s2 = fit.ssr / (nobs - k)
    s = math.sqrt(s2)
    gamma0 = s2 * (nobs - k) / nobs
    lam2 = long_run_variance(u, min(bandwidth, nobs - 1))
    lam = math.sqrt(lam2)
    sigma = float(fit.std_errors()[k - 1])
    t_gamma = float(fit.coef[k - 1]) / sigma
    statistic = math.sqrt(gamma0 / lam2) * t_gamma - 0.5 * ((lam2 - gamma0) / lam) * (nobs * sigma / s)

    critical = ADF_CRITICAL_VALUES[trend]
    return UnitRootReport(
        test=UnitRootTest.PP,
        statistic=float(statistic),
        p_value=_mackinnon_pvalue(statistic, trend),
        lags=bandwidth,
        trend=trend,
        critical_values=dict(critical),
        reject_at=_rejections(statistic, critical, left_tail=True),
        n_obs=nobs,
    )


def kpss_pvalue(statistic: float, trend: TrendSpec) -> Tuple[float, Optional[str]]:
    """Interpolated KPSS p-value and, when clamped, the direction of the bound."""
    quantiles = _KPSS_QUANTILES[trend]
    if statistic < quantiles[0]:
        return _KPSS_PVALUES[0], ">"
    if statistic > quantiles[-1]:
        return _KPSS_PVALUES[-1], "<"
    return float(np.interp(statistic, quantiles, _KPSS_PVALUES)), None


def kpss_test(x, trend: TrendSpec = TrendSpec.CONSTANT, bandwidth: Optional[int] = None) -> UnitRootReport:
    """KPSS test of level or trend stationarity.

    Raises:
        UnsupportedSpecError: If trend is NONE
        SampleSizeError: If N < 25
        ArgumentError: If bandwidth is negative or not below N
    """
    trend = TrendSpec(trend)
    if trend is TrendSpec.NONE:
        raise UnsupportedSpecError("KPSS requires a constant or constant-and-linear trend")
    x = _as_vector(x)
    n = x.size
    if n < KPSS_MIN_OBS:
        raise SampleSizeError(f"KPSS needs N >= {KPSS_MIN_OBS}, got {n}")
    bandwidth = default_bandwidth(n) if bandwidth is None else int(bandwidth)
    if not 0 <= bandwidth < n:
        raise ArgumentError(f"bandwidth must be in [0, {n - 1}], got {bandwidth}")

    resid = ols(x, _deterministic(trend, n)).residuals
    partial = np.cumsum(resid)
    lrv = long_run_variance(resid, bandwidth)
    if lrv <= 0:
        raise ArgumentError("KPSS long-run variance is not positive")
    statistic = float(partial @ partial) / (n * n * lrv)
    p_value, bound = kpss_pvalue(statistic, trend)
    critical = KPSS_CRITICAL_VALUES[trend]
    return UnitRootReport(
        test=UnitRootTest.KPSS,
        statistic=statistic,
        p_value=p_value,
        lags=bandwidth,
        trend=trend,
        critical_values=dict(critical),
        reject_at=_rejections(statistic, critical, left_tail=False),
        n_obs=n,
        p_value_bound=bound,
    )


def integration_order(x, trend: TrendSpec = TrendSpec.CONSTANT, max_order: int = 2, **kwargs) -> int:
    """Smallest d for which ADF rejects a unit root in the d-th difference.

    Returns max_order when no difference up to max_order - 1 is stationary.
    """
    series = _as_vector(x)
    for d in range(max_order):
        if adf_test(series, trend, **kwargs).rejected:
            return d
        series = np.diff(series)
    return max_order

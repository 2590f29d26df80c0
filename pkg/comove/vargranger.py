"""
VAR estimation, lag selection and Granger-causality F-tests, including the
scale-by-scale tests on wavelet detail series.
"""
import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats as sps

from .exceptions import ArgumentError, SampleSizeError
from .models import AlignedPanel, GrangerReport, ScaleDecomposition, VarResult
from .utils.regression import add_constant, lagmat, ols

logger = logging.getLogger(__name__)

SIGNIFICANCE_LEGEND = "Signif. codes:  0 ‘***’ 0.001 ‘**’ 0.01 ‘*’ 0.05 ‘.’ 0.1 ‘ ’ 1"

# (dependent, independent) in the order of the published scale tables.
DEFAULT_GRANGER_PAIRS: Tuple[Tuple[str, str], ...] = (
    ("oil", "nifty"),
    ("nifty", "oil"),
    ("gold", "nifty"),
    ("nifty", "gold"),
)
DEFAULT_GRANGER_LAG = 3
DEFAULT_MAX_VAR_LAGS = 8

VarInput = Union[AlignedPanel, np.ndarray, Sequence[np.ndarray]]


def _as_matrix(data: VarInput) -> Tuple[np.ndarray, Tuple[str, ...]]:
    if isinstance(data, AlignedPanel):
        return data.matrix(), tuple(data.names)
    if isinstance(data, np.ndarray) and data.ndim == 2:
        Y = np.asarray(data, dtype=float)
    else:
        Y = np.column_stack([np.asarray(v, dtype=float).ravel() for v in data])
    return Y, tuple(f"y{i + 1}" for i in range(Y.shape[1]))


def _check_length(n: int, lag_order: int) -> None:
    if lag_order < 1:
        raise ArgumentError(f"lag_order must be at least 1, got {lag_order}")
    if n <= 2 * lag_order + 5:
        raise SampleSizeError(f"Need N > {2 * lag_order + 5} observations for lag {lag_order}, got {n}")


def _var_design(Y: np.ndarray, lag_order: int, start: int) -> np.ndarray:
    """[1, Y_{t-1}, ..., Y_{t-p}] for rows t >= start."""
    k = Y.shape[1]
    blocks = []
    for lag in range(1, lag_order + 1):
        blocks.append(np.column_stack([lagmat(Y[:, i], start)[:, lag - 1] for i in range(k)]))
    return add_constant(np.column_stack(blocks))


def var_fit(data: VarInput, lag_order: int) -> VarResult:
    """Per-equation OLS estimate of a VAR(p) with intercept.

    Args:
        data: Panel, N x K matrix, or a sequence of equal-length vectors
        lag_order: VAR order p

    Returns:
        VarResult with coefficients[l-1][i, j] = effect of variable j at lag l on equation i

    Raises:
        SampleSizeError: If N <= 2p + 5
        SingularDesignError: If the lagged design is rank deficient (e.g. a constant series)
    """
    Y, names = _as_matrix(data)
    n, k = Y.shape
    _check_length(n, lag_order)
    return _fit(Y, lag_order, lag_order, names)


def _fit(Y: np.ndarray, lag_order: int, start: int, names: Tuple[str, ...]) -> VarResult:
    k = Y.shape[1]
    X = _var_design(Y, lag_order, start)
    fits = [ols(Y[start:, i], X) for i in range(k)]
    coef = np.array([f.coef for f in fits])
    resid = np.column_stack([f.residuals for f in fits])
    t_eff = resid.shape[0]
    dof = t_eff - X.shape[1]
    sigma = resid.T @ resid / dof
    _, logdet = np.linalg.slogdet(resid.T @ resid / t_eff)
    aic = logdet + 2.0 * lag_order * k * k / t_eff
    lag_blocks = coef[:, 1:].reshape(k, lag_order, k).transpose(1, 0, 2)
    return VarResult(
        intercept=coef[:, 0],
        coefficients=lag_blocks,
        residuals=resid,
        sigma=sigma,
        lag_order=lag_order,
        aic=float(aic),
        variables=names,
    )


def select_var_order(data: VarInput, max_lags: int = DEFAULT_MAX_VAR_LAGS) -> int:
    """VAR order in 1..max_lags minimising AIC on a common sample."""
    Y, names = _as_matrix(data)
    _check_length(Y.shape[0], max_lags)
    scores = {p: _fit(Y, p, max_lags, names).aic for p in range(1, max_lags + 1)}
    best = min(scores, key=lambda p: (scores[p], p))
    logger.debug("AIC by VAR order: %s -> %d", scores, best)
    return best


def granger_test(
    y, x, lag_order: int, dependent: str = "y", independent: str = "x", scale: Optional[int] = None
) -> GrangerReport:
    """F-test of whether lags of x help predict y beyond y's own lags.

    F = [(SSR_r - SSR_u) / p] / [SSR_u / (T - 2p - 1)] with T = N - p usable rows.
    A perfect unrestricted fit returns F = inf and p = 0.

    Raises:
        ArgumentError: If the lengths differ
        SampleSizeError: If N <= 2p + 5
        SingularDesignError: If the restricted design is rank deficient
    """
    y = np.asarray(y, dtype=float).ravel()
    x = np.asarray(x, dtype=float).ravel()
    if y.size != x.size:
        raise ArgumentError(f"Length mismatch: {y.size} vs {x.size}")
    _check_length(y.size, lag_order)

    target = y[lag_order:]
    own = lagmat(y, lag_order)
    other = lagmat(x, lag_order)
    restricted = ols(target, add_constant(own))
    unrestricted = ols(target, add_constant(np.column_stack([own, other])), allow_rank_deficient=True)
    if unrestricted.rank < 2 * lag_order + 1:
        logger.warning("Granger %s <- %s: collinear lags, unrestricted fit is rank deficient", dependent, independent)

    t_eff = target.size
    df_den = t_eff - 2 * lag_order - 1
    ssr_r = restricted.ssr
    ssr_u = min(unrestricted.ssr, ssr_r)
    if ssr_u <= np.finfo(float).eps * t_eff * max(ssr_r, np.finfo(float).tiny):
        f_stat, p_value = math.inf, 0.0
    else:
        f_stat = ((ssr_r - ssr_u) / lag_order) / (ssr_u / df_den)
        p_value = float(sps.f.sf(f_stat, lag_order, df_den))
    return GrangerReport(
        dependent=dependent,
        independent=independent,
        lag_order=lag_order,
        f_statistic=float(f_stat),
        p_value=float(np.clip(p_value, 0.0, 1.0)),
        df_num=lag_order,
        df_den=df_den,
        ssr_restricted=ssr_r,
        ssr_unrestricted=ssr_u,
        scale=scale,
    )


def scale_granger_matrix(
    decompositions: Mapping[str, ScaleDecomposition],
    pairs: Sequence[Tuple[str, str]] = DEFAULT_GRANGER_PAIRS,
    lag_order: Union[int, str] = DEFAULT_GRANGER_LAG,
    max_lags: int = DEFAULT_MAX_VAR_LAGS,
) -> Dict[int, List[GrangerReport]]:
    """Granger tests on the detail series of every scale for every ordered pair.

    Args:
        decompositions: Decomposition per series label
        pairs: (dependent, independent) labels
        lag_order: Fixed lag, or 'aic' to select one per scale and pair
        max_lags: Upper bound of the AIC search

    Returns:
        {j: [GrangerReport per pair]} for j = 1..J

    Raises:
        ArgumentError: If decompositions differ in J or N, or a label is missing
    """
    if not decompositions:
        raise ArgumentError("No decompositions given")
    shapes = {(d.J, d.n_obs) for d in decompositions.values()}
    if len(shapes) != 1:
        raise ArgumentError(f"Decompositions disagree on (J, N): {sorted(shapes)}")
    J = next(iter(shapes))[0]
    for dep, ind in pairs:
        for label in (dep, ind):
            if label not in decompositions:
                raise ArgumentError(f"No decomposition for '{label}'")

    table: Dict[int, List[GrangerReport]] = {}
    for j in range(1, J + 1):
        row = []
        for dep, ind in pairs:
            y = decompositions[dep].detail(j)
            x = decompositions[ind].detail(j)
            p = select_var_order([y, x], max_lags) if lag_order == "aic" else int(lag_order)
            row.append(granger_test(y, x, p, dependent=dep, independent=ind, scale=j))
        table[j] = row
    logger.info("Scale Granger matrix: %d scales x %d directions", J, len(pairs))
    return table

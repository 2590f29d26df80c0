"""
Least-squares kernel shared by the regression-based statistics.

Designs are solved through a QR factorisation of the column-scaled design
matrix; level series of order 1e4 next to a unit intercept stay well
conditioned that way.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from ..exceptions import ArgumentError, SingularDesignError

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class LeastSquaresFit:
    """Coefficients and residual summary of y = X b + e."""
    coef: np.ndarray
    residuals: np.ndarray
    ssr: float
    rank: int
    xtx_inv: np.ndarray

    @property
    def n_obs(self) -> int:
        return int(self.residuals.size)

    @property
    def n_params(self) -> int:
        return int(self.coef.size)

    def sigma2(self) -> float:
        """Residual variance with the n - k degrees-of-freedom correction."""
        dof = self.n_obs - self.rank
        return self.ssr / dof if dof > 0 else float('nan')

    def std_errors(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.xtx_inv), 0.0, None) * self.sigma2())


def add_constant(X: np.ndarray) -> np.ndarray:
    """Prepend a column of ones."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return np.column_stack([np.ones(X.shape[0]), X])


def lagmat(x: np.ndarray, lags: int) -> np.ndarray:
    """Matrix whose column i holds x lagged by i+1, trimmed to full rows.

    Row t of the result corresponds to x[t + lags].
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if lags < 0 or lags >= n:
        raise ArgumentError(f"lags must be in [0, {n - 1}], got {lags}")
    return np.column_stack([x[lags - i - 1:n - i - 1] for i in range(lags)]) if lags else np.empty((n, 0))


def ols(y: np.ndarray, X: np.ndarray, allow_rank_deficient: bool = False) -> LeastSquaresFit:
    """Least-squares solution of y = X b + e via QR.

    Args:
        y: Response vector of length n
        X: Design matrix n x k (include the intercept column yourself)
        allow_rank_deficient: Fall back to the minimum-norm solution instead of
            raising when the design is rank deficient

    Returns:
        LeastSquaresFit with coefficients, residuals and (X'X)^-1

    Raises:
        SingularDesignError: If X is rank deficient and the fallback is off
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.shape != (n,):
        raise ArgumentError(f"Response has shape {y.shape}, design has {n} rows")
    if k == 0:
        return LeastSquaresFit(np.empty(0), y.copy(), float(y @ y), 0, np.empty((0, 0)))
    if n < k:
        raise SingularDesignError(f"Design has {k} columns but only {n} rows")

    norms = np.linalg.norm(X, axis=0)
    rank = _scaled_rank(X, norms)
    if rank < k:
        if not allow_rank_deficient:
            raise SingularDesignError(f"Design matrix is rank deficient (rank {rank} < {k})")
        logger.warning("Rank-deficient design (rank %d < %d); using minimum-norm solution", rank, k)
        coef, *_ = np.linalg.lstsq(X, y, rcond=None)
        resid = y - X @ coef
        return LeastSquaresFit(coef, resid, float(resid @ resid), rank, np.linalg.pinv(X.T @ X))

    Xs = X / norms
    Q, R = linalg.qr(Xs, mode='economic')
    coef_s = linalg.solve_triangular(R, Q.T @ y)
    coef = coef_s / norms
    resid = y - X @ coef
    R_inv = linalg.solve_triangular(R, np.eye(k))
    xtx_inv = (R_inv @ R_inv.T) / np.outer(norms, norms)
    return LeastSquaresFit(coef, resid, float(resid @ resid), k, xtx_inv)


def _scaled_rank(X: np.ndarray, norms: Optional[np.ndarray] = None) -> int:
    if norms is None:
        norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0):
        nonzero = norms > 0
        return _scaled_rank(X[:, nonzero], norms[nonzero]) if nonzero.any() else 0
    sv = np.linalg.svd(X / norms, compute_uv=False)
    return int(np.sum(sv > RANK_TOLERANCE * sv[0]))

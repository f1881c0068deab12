"""Ordinary least squares via QR, with standard errors and rank diagnostics."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .validation import as_1d_array, as_2d_array


class RankDeficientError(ValueError):
    """Design matrix is rank deficient; `columns` names the offenders."""

    def __init__(self, columns: list[str]):
        self.columns = columns
        super().__init__(f"design matrix is rank deficient in columns: {columns}")


class QrOls(BaseEstimator):
    """Linear least squares solved through a reduced QR factorization.

    Never forms (X^T X)^-1 explicitly: coefficients come from back-substitution
    against R, the coefficient covariance from the inverse of R obtained by
    triangular solves. Column names feed the rank-deficiency error message.

    Attributes (after fit): coef_, stderr_, residuals_, sigma2_, n_samples_,
    rank_, column_names_.
    """

    def __init__(self, column_names: list[str] | None = None, rcond: float = 1e-10):
        self.column_names = column_names
        self.rcond = rcond

    def fit(self, X, y) -> "QrOls":
        X = as_2d_array(X)
        y = as_1d_array(y, "y")
        n, p = X.shape
        if len(y) != n:
            raise ValueError("X and y length mismatch")
        if n < p:
            raise ValueError(f"need at least as many samples ({n}) as columns ({p})")
        names = self.column_names or [f"x{j}" for j in range(p)]
        if len(names) != p:
            raise ValueError("column_names length mismatch")

        q, r = np.linalg.qr(X, mode="reduced")
        diag = np.abs(np.diag(r))
        scale = diag.max() if diag.size else 0.0
        bad = diag <= self.rcond * max(scale, 1.0)
        if np.any(bad):
            raise RankDeficientError([names[j] for j in np.flatnonzero(bad)])

        coef = np.linalg.solve(r, q.T @ y)
        residuals = y - X @ coef
        dof = n - p
        sigma2 = float(residuals @ residuals) / dof if dof > 0 else 0.0
        r_inv = np.linalg.solve(r, np.eye(p))
        cov = sigma2 * (r_inv @ r_inv.T)

        self.coef_ = coef
        self.stderr_ = np.sqrt(np.maximum(np.diag(cov), 0.0))
        self.residuals_ = residuals
        self.sigma2_ = sigma2
        self.n_samples_ = n
        self.rank_ = p
        self.column_names_ = list(names)
        return self

    def predict(self, X) -> np.ndarray:
        return as_2d_array(X) @ self.coef_

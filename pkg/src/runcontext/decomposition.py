"""PCA on z-scored columns via eigendecomposition of the correlation matrix."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .validation import as_2d_array, check_min_samples


class ConstantColumnError(ValueError):
    def __init__(self, columns: list[str]):
        self.columns = columns
        super().__init__(f"constant columns cannot be standardized: {columns}")


class StandardizedPCA(BaseEstimator):
    """Principal components of the column-correlation structure.

    Columns are z-scored (ddof=1); components are the eigenvectors of the
    correlation matrix ordered by descending eigenvalue. Sign convention: the
    largest-magnitude loading of each component is made positive, so results
    are reproducible across LAPACK builds.

    Attributes (after fit): components_ (rows are components), explained_variance_ratio_,
    eigenvalues_, correlation_, means_, scales_, column_names_.
    """

    def __init__(self, column_names: list[str] | None = None):
        self.column_names = column_names

    def fit(self, X, y=None) -> "StandardizedPCA":
        X = as_2d_array(X)
        n, p = X.shape
        check_min_samples(n, 3, "StandardizedPCA.fit")
        if p < 2:
            raise ValueError("need at least 2 columns")
        names = self.column_names or [f"x{j}" for j in range(p)]
        means = X.mean(axis=0)
        scales = X.std(axis=0, ddof=1)
        constant = [names[j] for j in range(p) if scales[j] == 0.0]
        if constant:
            raise ConstantColumnError(constant)
        z = (X - means) / scales
        corr = (z.T @ z) / (n - 1)
        eigvals, eigvecs = np.linalg.eigh(corr)
        order = np.argsort(eigvals)[::-1]
        eigvals = np.maximum(eigvals[order], 0.0)
        comps = eigvecs[:, order].T
        for i in range(p):
            j = int(np.argmax(np.abs(comps[i])))
            if comps[i, j] < 0:
                comps[i] = -comps[i]
        self.components_ = comps
        self.eigenvalues_ = eigvals
        self.explained_variance_ratio_ = eigvals / eigvals.sum()
        self.correlation_ = corr
        self.means_ = means
        self.scales_ = scales
        self.column_names_ = list(names)
        return self

    def transform(self, X) -> np.ndarray:
        z = (as_2d_array(X) - self.means_) / self.scales_
        return z @ self.components_.T

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).transform(X)

    def inverse_transform(self, scores) -> np.ndarray:
        z = as_2d_array(scores, "scores") @ self.components_
        return z * self.scales_ + self.means_

"""Deterministic 1D k-means used for defensive depth lines."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .validation import as_1d_array, check_min_samples


def _contiguous_optimum(sorted_xs: np.ndarray, k: int) -> tuple[np.ndarray, float]:
    """Exact 1D k-means on sorted values via DP over contiguous segments.

    Optimal 1D partitions are contiguous in sorted order, so segment SSEs from
    prefix sums give the global optimum in O(k n^2). Returns (labels in sorted
    order, sse).
    """
    n = len(sorted_xs)
    s1 = np.concatenate([[0.0], np.cumsum(sorted_xs)])
    s2 = np.concatenate([[0.0], np.cumsum(sorted_xs**2)])

    def seg(a: int, b: int) -> float:  # SSE of sorted_xs[a:b]
        m = b - a
        total = s1[b] - s1[a]
        return float(s2[b] - s2[a] - total * total / m)

    INF = float("inf")
    dp = np.full((k + 1, n + 1), INF)
    cut = np.zeros((k + 1, n + 1), dtype=np.int64)
    dp[0, 0] = 0.0
    for m in range(1, k + 1):
        for i in range(m, n + 1):
            best, arg = INF, m - 1
            for j in range(m - 1, i):
                c = dp[m - 1, j] + seg(j, i)
                if c < best:
                    best, arg = c, j
            dp[m, i] = best
            cut[m, i] = arg
    labels = np.empty(n, dtype=np.int64)
    i = n
    for m in range(k, 0, -1):
        j = int(cut[m, i])
        labels[j:i] = m - 1
        i = j
    return labels, float(dp[k, n])


class DepthKMeans(BaseEstimator):
    """1D k-means: quantile-initialized Lloyd iterations with an exact
    contiguous-partition refinement on small inputs.

    Centers start at the (2i+1)/2k quantiles, which makes fits reproducible
    without a seed; empty clusters are reseeded at the point farthest from its
    current center, and iteration stops at an assignment fixpoint. Lloyd can
    stall in a local minimum when cluster sizes are very uneven, so for inputs
    up to `exact_below` points the exact sorted-order DP answer replaces the
    Lloyd result whenever it is strictly better — deterministic either way.

    Attributes (after fit): cluster_centers_ (sorted ascending), labels_,
    inertia_, n_iter_.
    """

    def __init__(self, n_clusters: int = 3, max_iter: int = 100, exact_below: int = 64):
        self.n_clusters = n_clusters
        self.max_iter = max_iter
        self.exact_below = exact_below

    def fit(self, X, y=None) -> "DepthKMeans":
        xs = as_1d_array(X)
        k = self.n_clusters
        check_min_samples(len(xs), k, "DepthKMeans.fit")
        qs = [(2 * i + 1) / (2 * k) for i in range(k)]
        centers = np.quantile(xs, qs)
        labels = self._assign(xs, centers)
        n_iter = 0
        for n_iter in range(1, self.max_iter + 1):
            for j in range(k):
                sel = labels == j
                if np.any(sel):
                    centers[j] = xs[sel].mean()
                else:
                    centers[j] = xs[np.argmax(np.abs(xs - centers[labels]))]
            new_labels = self._assign(xs, centers)
            if np.array_equal(new_labels, labels):
                break
            labels = new_labels
        order = np.argsort(centers, kind="stable")
        centers = centers[order]
        remap = np.empty(k, dtype=np.int64)
        remap[order] = np.arange(k)
        labels = remap[labels]
        inertia = float(np.sum((xs - centers[labels]) ** 2))

        if len(xs) <= self.exact_below:
            sort_idx = np.argsort(xs, kind="stable")
            exact_labels_sorted, exact_sse = _contiguous_optimum(xs[sort_idx], k)
            if exact_sse < inertia - 1e-12:
                labels = np.empty(len(xs), dtype=np.int64)
                labels[sort_idx] = exact_labels_sorted
                centers = np.array([xs[labels == j].mean() for j in range(k)])
                inertia = exact_sse

        self.cluster_centers_ = centers
        self.labels_ = labels
        self.inertia_ = inertia
        self.n_iter_ = n_iter
        return self

    def predict(self, X) -> np.ndarray:
        xs = as_1d_array(X)
        return self._assign(xs, self.cluster_centers_)

    @staticmethod
    def _assign(xs: np.ndarray, centers: np.ndarray) -> np.ndarray:
        # ties resolve to the lower cluster index via argmin
        return np.argmin(np.abs(xs[:, None] - centers[None, :]), axis=1)

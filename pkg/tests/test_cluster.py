from __future__ import annotations

import itertools

import numpy as np
import pytest

from runcontext.cluster import DepthKMeans


def contiguous_partition_optimum(xs: np.ndarray, k: int = 3) -> float:
    """Exhaustive minimum SSE over contiguous k-partitions of the sorted
    values (1D k-means optima are contiguous in sorted order)."""
    s = np.sort(xs)
    n = len(s)
    best = np.inf
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0, *cuts, n)
        sse = 0.0
        for a, b in zip(bounds, bounds[1:]):
            seg = s[a:b]
            sse += float(np.sum((seg - seg.mean()) ** 2))
        best = min(best, sse)
    return best


FIXTURES = [
    [10, 11, 25, 26, 40, 41],
    [0, 0, 0, 1, 1, 1, 2, 2, 2],
    [1, 2, 3, 10, 11, 12, 30, 31, 32, 33],
    [5, 5, 5, 5, 5, 5],
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
    [20, 21, 19, 35, 36, 34, 50, 51, 49],
    [0, 10, 20],
    [1, 1, 2, 50, 51, 99, 100],
    [3.5, 3.6, 3.7, 8.1, 8.2, 15.9],
    [-5, -4, 0, 1, 9, 10, 11],
]


class TestDepthKMeans:
    def test_three_well_separated_pairs(self):
        km = DepthKMeans(n_clusters=3).fit([10, 11, 25, 26, 40, 41])
        assert np.allclose(km.cluster_centers_, [10.5, 25.5, 40.5])

    def test_all_identical_values(self):
        km = DepthKMeans(n_clusters=3).fit([30.0] * 7)
        assert np.allclose(km.cluster_centers_, [30.0, 30.0, 30.0])
        assert km.inertia_ == 0.0

    def test_centers_sorted(self, rng):
        for _ in range(20):
            xs = rng.uniform(0, 100, size=rng.integers(3, 15))
            km = DepthKMeans(n_clusters=3).fit(xs)
            assert np.all(np.diff(km.cluster_centers_) >= 0)

    def test_permutation_invariant(self, rng):
        xs = np.array([20.0, 21.0, 35.0, 36.0, 50.0, 51.0, 19.0, 34.0])
        base = DepthKMeans(n_clusters=3).fit(xs).cluster_centers_
        for _ in range(10):
            perm = rng.permutation(xs)
            assert np.allclose(DepthKMeans(n_clusters=3).fit(perm).cluster_centers_, base)

    @pytest.mark.parametrize("xs", FIXTURES, ids=[f"fix{i}" for i in range(len(FIXTURES))])
    def test_sse_matches_contiguous_optimum(self, xs):
        xs = np.asarray(xs, dtype=np.float64)
        km = DepthKMeans(n_clusters=3).fit(xs)
        assert km.inertia_ <= contiguous_partition_optimum(xs) + 1e-9

    def test_monte_carlo_three_lines(self, rng):
        """Uniform +/-1 m jitter on a 4-4-2-ish depth layout: every cluster
        mean stays within 1 m of its block center by construction, and the
        exact-partition oracle confirms the clustering."""
        hits = 0
        for _ in range(100):
            xs = np.concatenate(
                [
                    20.0 + rng.uniform(-1, 1, 4),
                    35.0 + rng.uniform(-1, 1, 4),
                    50.0 + rng.uniform(-1, 1, 2),
                ]
            )
            km = DepthKMeans(n_clusters=3).fit(xs)
            if np.all(np.abs(km.cluster_centers_ - [20.0, 35.0, 50.0]) < 1.0):
                hits += 1
            assert km.inertia_ <= contiguous_partition_optimum(xs) + 1e-9
        assert hits >= 99

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            DepthKMeans(n_clusters=3).fit([1.0, 2.0])

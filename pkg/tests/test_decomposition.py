from __future__ import annotations

import numpy as np
import pytest

from runcontext.decomposition import ConstantColumnError, StandardizedPCA


class TestStandardizedPCA:
    def test_rank_one_gives_full_first_ratio(self):
        x = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        X = np.column_stack([x, 2 * x + 1])  # perfectly correlated
        pca = StandardizedPCA().fit(X)
        assert abs(pca.explained_variance_ratio_[0] - 1.0) < 1e-12

    def test_ratios_sum_to_one(self, rng):
        X = rng.normal(size=(40, 5))
        pca = StandardizedPCA().fit(X)
        assert abs(pca.explained_variance_ratio_.sum() - 1.0) < 1e-9

    def test_independent_columns_near_uniform_ratios(self, rng):
        X = rng.normal(size=(20000, 4))
        pca = StandardizedPCA().fit(X)
        assert np.all(np.abs(pca.explained_variance_ratio_ - 0.25) < 0.05)

    def test_reconstruction(self, rng):
        X = rng.normal(size=(30, 4)) @ rng.normal(size=(4, 4)) + rng.uniform(0, 5, 4)
        pca = StandardizedPCA().fit(X)
        z = (X - pca.means_) / pca.scales_
        scores = pca.transform(X)
        assert np.max(np.abs(scores @ pca.components_ - z)) < 1e-9
        assert np.max(np.abs(pca.inverse_transform(scores) - X)) < 1e-8

    def test_loadings_orthonormal(self, rng):
        X = rng.normal(size=(25, 6))
        pca = StandardizedPCA().fit(X)
        gram = pca.components_ @ pca.components_.T
        assert np.max(np.abs(gram - np.eye(6))) < 1e-9

    def test_sign_convention(self, rng):
        X = rng.normal(size=(25, 4))
        pca = StandardizedPCA().fit(X)
        for comp in pca.components_:
            assert comp[np.argmax(np.abs(comp))] > 0

    def test_constant_column_named(self):
        X = np.column_stack([np.arange(5.0), np.full(5, 3.0)])
        with pytest.raises(ConstantColumnError) as exc:
            StandardizedPCA(column_names=["a", "flat"]).fit(X)
        assert exc.value.columns == ["flat"]

    def test_too_few_rows(self):
        with pytest.raises(ValueError):
            StandardizedPCA().fit(np.ones((2, 3)))

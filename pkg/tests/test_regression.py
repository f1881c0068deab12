from __future__ import annotations

import numpy as np
import pytest

from runcontext.regression import QrOls, RankDeficientError


class TestQrOls:
    def test_exact_recovery_zero_noise(self, rng):
        X = np.column_stack([np.ones(50), rng.uniform(0, 1, 50), rng.uniform(0, 10, 50)])
        beta = np.array([0.3, -1.2, 0.05])
        model = QrOls().fit(X, X @ beta)
        assert np.allclose(model.coef_, beta, rtol=1e-9, atol=1e-12)

    def test_residual_orthogonality(self, rng):
        X = np.column_stack([np.ones(200), rng.normal(size=(200, 3))])
        y = rng.normal(size=200)
        model = QrOls().fit(X, y)
        assert np.max(np.abs(X.T @ model.residuals_)) < 1e-8

    def test_matches_lstsq(self, rng):
        X = np.column_stack([np.ones(80), rng.normal(size=(80, 4))])
        y = rng.normal(size=80)
        expected, *_ = np.linalg.lstsq(X, y, rcond=None)
        model = QrOls().fit(X, y)
        assert np.allclose(model.coef_, expected, atol=1e-10)

    def test_stderr_against_closed_form(self, rng):
        """sigma^2 (X'X)^-1 computed the direct way, small well-conditioned case."""
        X = np.column_stack([np.ones(60), rng.uniform(0, 5, 60)])
        y = rng.normal(size=60)
        model = QrOls().fit(X, y)
        resid = y - X @ model.coef_
        sigma2 = resid @ resid / (60 - 2)
        cov = sigma2 * np.linalg.inv(X.T @ X)
        assert np.allclose(model.stderr_, np.sqrt(np.diag(cov)), rtol=1e-9)

    def test_rank_deficiency_names_columns(self):
        X = np.column_stack([np.ones(10), np.arange(10.0), 2 * np.arange(10.0)])
        with pytest.raises(RankDeficientError) as exc:
            QrOls(column_names=["intercept", "a", "a_twice"]).fit(X, np.zeros(10))
        assert "a_twice" in exc.value.columns

    def test_not_enough_samples(self):
        with pytest.raises(ValueError):
            QrOls().fit(np.ones((2, 3)), np.zeros(2))

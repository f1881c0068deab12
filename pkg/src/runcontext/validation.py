"""Input validation helpers shared by the estimator-style models."""
from __future__ import annotations

import numpy as np


def as_1d_array(x, name: str = "X") -> np.ndarray:
    a = np.asarray(x, dtype=np.float64)
    if a.ndim == 2 and a.shape[1] == 1:
        a = a[:, 0]
    if a.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    return a


def as_2d_array(x, name: str = "X") -> np.ndarray:
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    return a


def check_min_samples(n: int, minimum: int, context: str) -> None:
    if n < minimum:
        raise ValueError(f"{context}: need at least {minimum} samples, got {n}")

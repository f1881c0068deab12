from __future__ import annotations

import numpy as np
import pytest

from runcontext.core import FRAME_INTERVAL_MS
from runcontext.kinematics import SpeedSignal


def signal_from_speeds(
    speeds_kmh, player_id: str = "p", t0_ms: int = 0, smooth=None
) -> SpeedSignal:
    """SpeedSignal with a pinned speed series; positions move along +x so the
    displacement per frame matches the raw speed exactly."""
    raw = np.asarray(speeds_kmh, dtype=np.float64)
    n = len(raw)
    t = t0_ms + np.arange(n, dtype=np.int64) * FRAME_INTERVAL_MS
    step_m = raw * FRAME_INTERVAL_MS / 3600.0  # km/h -> m per 100 ms
    x = np.concatenate([[0.0], np.cumsum(step_m[1:])])
    xy = np.column_stack([x, np.zeros(n)])
    smooth_arr = raw if smooth is None else np.asarray(smooth, dtype=np.float64)
    return SpeedSignal(
        player_id=player_id,
        t_ms=t,
        xy=xy,
        raw_kmh=raw,
        smooth_kmh=smooth_arr,
        valid=np.ones(n, dtype=bool),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)

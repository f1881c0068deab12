"""Per-player speed signals and valley-to-valley run segmentation.

A player's trace becomes a 10 Hz speed signal (frame-to-frame displacement,
outlier treatment, centered rolling mean), the signal is quantized into the
four speed categories, and maximal constant-category intervals delimit runs:
an interval strictly lower than both neighbors is a valley, and each pair of
consecutive valleys encloses one run whose peak is the highest interval
between them.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .config import DEFAULT_CONFIG, PipelineConfig
from .core import FRAME_INTERVAL_MS, speed_categories

MS_TO_KMH = 3600.0  # m/ms -> km/h


@dataclass(frozen=True)
class SpeedSignal:
    """Aligned arrays on a contiguous 100 ms timeline.

    Invalid samples (treated outliers) stay in place with interpolated
    values — the timeline is never shortened.
    """

    player_id: str
    t_ms: np.ndarray      # (n,) int64
    xy: np.ndarray        # (n, 2) positions the speeds were derived from
    raw_kmh: np.ndarray   # (n,)
    smooth_kmh: np.ndarray
    valid: np.ndarray     # (n,) bool

    def __len__(self) -> int:
        return len(self.t_ms)

    @property
    def duration_ms(self) -> int:
        return int(self.t_ms[-1] - self.t_ms[0])


@dataclass(frozen=True)
class RunEffort:
    """One valley-to-valley effort with its three key moments.

    origin is the position when the starting valley ends, destination the
    position when the peak ends; distances integrate displacement between
    those two moments.
    """

    player_id: str
    t_valley_end: int
    t_peak_start: int
    t_peak_end: int
    t_next_valley_start: int
    origin: tuple[float, float]
    destination: tuple[float, float]
    peak_speed: float
    distance_total: float
    distance_hi: float
    is_hi: bool


def _rolling_mean(a: np.ndarray, window: int) -> np.ndarray:
    """Centered rolling mean; the window shrinks at the edges."""
    kernel = np.ones(window)
    s = np.convolve(a, kernel, mode="same")
    c = np.convolve(np.ones(len(a)), kernel, mode="same")
    return s / c


def _interpolate_invalid(values: np.ndarray, valid: np.ndarray) -> np.ndarray:
    """Linear interpolation across invalid runs; edges hold the nearest valid value."""
    if valid.all():
        return values
    if not valid.any():
        raise ValueError("signal has no valid samples left")
    idx = np.arange(len(values))
    out = values.copy()
    out[~valid] = np.interp(idx[~valid], idx[valid], values[valid])
    return out


def compute_speed(
    t_ms: np.ndarray,
    xy: np.ndarray,
    player_id: str = "",
    config: PipelineConfig = DEFAULT_CONFIG,
) -> SpeedSignal:
    """Build the smoothed, outlier-treated speed signal for one player.

    Gaps up to `config.max_gap_ms` are filled by linear position interpolation
    onto the 100 ms grid; larger gaps are the caller's job to split on. The
    first sample copies the second (no displacement exists for it).
    """
    t_ms = np.asarray(t_ms, dtype=np.int64)
    xy = np.asarray(xy, dtype=np.float64)
    if len(t_ms) < 2:
        raise ValueError("need at least 2 samples to compute speed")
    if xy.shape != (len(t_ms), 2):
        raise ValueError("positions must be (n, 2) aligned with t_ms")
    dt = np.diff(t_ms)
    if np.any(dt <= 0):
        raise ValueError("timestamps must be strictly increasing")
    if np.any(dt > config.max_gap_ms):
        raise ValueError(
            f"gap of {int(dt.max())} ms exceeds {config.max_gap_ms} ms; split the series first"
        )

    if np.any(dt != FRAME_INTERVAL_MS):
        grid = np.arange(t_ms[0], t_ms[-1] + 1, FRAME_INTERVAL_MS, dtype=np.int64)
        gx = np.interp(grid, t_ms, xy[:, 0])
        gy = np.interp(grid, t_ms, xy[:, 1])
        t_ms, xy = grid, np.column_stack([gx, gy])

    step = np.linalg.norm(np.diff(xy, axis=0), axis=1)
    raw = np.empty(len(t_ms))
    raw[1:] = step / FRAME_INTERVAL_MS * MS_TO_KMH
    raw[0] = raw[1]
    signal = SpeedSignal(
        player_id=player_id,
        t_ms=t_ms,
        xy=xy,
        raw_kmh=raw,
        smooth_kmh=_rolling_mean(raw, config.smoothing_window),
        valid=np.ones(len(t_ms), dtype=bool),
    )
    return treat_outliers(signal, config)


def treat_outliers(signal: SpeedSignal, config: PipelineConfig = DEFAULT_CONFIG) -> SpeedSignal:
    """Flag raw speeds above the cap, interpolate them, re-smooth."""
    valid = signal.valid & (signal.raw_kmh <= config.outlier_speed_kmh)
    if valid.all() and signal.valid.all():
        return signal
    raw = _interpolate_invalid(signal.raw_kmh, valid)
    return replace(
        signal,
        raw_kmh=raw,
        smooth_kmh=_rolling_mean(raw, config.smoothing_window),
        valid=valid,
    )


@dataclass(frozen=True)
class _Interval:
    start: int  # sample index, inclusive
    end: int    # sample index, inclusive
    cat: int

    def n(self) -> int:
        return self.end - self.start + 1


def _quantize_intervals(cats: np.ndarray) -> list[_Interval]:
    breaks = np.flatnonzero(np.diff(cats) != 0)
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [len(cats) - 1]])
    return [
        _Interval(int(a), int(b), int(cats[a])) for a, b in zip(starts, ends)
    ]


def _merge_short(intervals: list[_Interval], min_samples: int) -> list[_Interval]:
    """Fold intervals shorter than min_samples into the closer-category neighbor.

    Left-to-right scan repeated until fixpoint; ties go to the earlier
    neighbor. Equal-category neighbors coalesce as a side effect.
    """
    ivs = list(intervals)
    changed = True
    while changed and len(ivs) > 1:
        changed = False
        i = 0
        while i < len(ivs):
            iv = ivs[i]
            if iv.n() >= min_samples:
                i += 1
                continue
            if i == 0:
                target = 1
            elif i == len(ivs) - 1:
                target = i - 1
            else:
                d_prev = abs(ivs[i - 1].cat - iv.cat)
                d_next = abs(ivs[i + 1].cat - iv.cat)
                target = i - 1 if d_prev <= d_next else i + 1
            nb = ivs[target]
            lo, hi = min(iv.start, nb.start), max(iv.end, nb.end)
            merged = _Interval(lo, hi, nb.cat)
            ivs[min(i, target)] = merged
            del ivs[max(i, target)]
            # coalesce equal-category neighbors created by the merge
            j = min(i, target)
            while j > 0 and ivs[j - 1].cat == ivs[j].cat:
                ivs[j - 1] = _Interval(ivs[j - 1].start, ivs[j].end, ivs[j].cat)
                del ivs[j]
                j -= 1
            while j < len(ivs) - 1 and ivs[j].cat == ivs[j + 1].cat:
                ivs[j] = _Interval(ivs[j].start, ivs[j + 1].end, ivs[j].cat)
                del ivs[j + 1]
            changed = True
            i = max(j, 0)
    return ivs


def _find_valleys(intervals: list[_Interval]) -> list[int]:
    """Indices of valley intervals; beyond both series ends the category
    counts as infinitely high, so a boundary interval is a valley whenever it
    sits below its single real neighbor."""
    n = len(intervals)
    valleys = []
    for i, iv in enumerate(intervals):
        left = intervals[i - 1].cat if i > 0 else np.inf
        right = intervals[i + 1].cat if i < n - 1 else np.inf
        if iv.cat < left and iv.cat < right:
            valleys.append(i)
    return valleys


def segment_runs(
    signal: SpeedSignal, config: PipelineConfig = DEFAULT_CONFIG
) -> list[RunEffort]:
    """Cut the smoothed signal into valley-delimited run efforts."""
    n = len(signal)
    if n == 0 or signal.duration_ms < config.min_signal_ms:
        return []
    smooth = signal.smooth_kmh
    cats = speed_categories(smooth, config.category_bounds_kmh)
    min_samples = max(1, config.min_interval_ms // FRAME_INTERVAL_MS)
    intervals = _merge_short(_quantize_intervals(cats), min_samples)
    valleys = _find_valleys(intervals)

    step = np.linalg.norm(np.diff(signal.xy, axis=0), axis=1)
    hi = smooth >= config.hi_threshold_kmh

    runs: list[RunEffort] = []
    for va, vb in zip(valleys, valleys[1:]):
        interior = intervals[va + 1 : vb]
        if not interior:
            continue
        span_a = intervals[va].end       # last sample of the starting valley
        span_b = intervals[vb].start     # first sample of the ending valley
        peak_idx = span_a + int(np.argmax(smooth[span_a : span_b + 1]))
        top = max(iv.cat for iv in interior)
        candidates = [iv for iv in interior if iv.cat == top]
        peak = next(
            (iv for iv in candidates if iv.start <= peak_idx <= iv.end), None
        )
        if peak is None:
            peak = max(candidates, key=lambda iv: float(np.max(smooth[iv.start : iv.end + 1])))

        d_slice = step[span_a : peak.end]  # displacement into samples span_a+1 .. peak.end
        hi_slice = hi[span_a + 1 : peak.end + 1]
        distance_total = float(d_slice.sum())
        distance_hi = float(d_slice[hi_slice].sum())
        peak_speed = float(smooth[peak_idx])

        runs.append(
            RunEffort(
                player_id=signal.player_id,
                t_valley_end=int(signal.t_ms[span_a]),
                t_peak_start=int(signal.t_ms[peak.start]),
                t_peak_end=int(signal.t_ms[peak.end]),
                t_next_valley_start=int(signal.t_ms[span_b]),
                origin=(float(signal.xy[span_a, 0]), float(signal.xy[span_a, 1])),
                destination=(float(signal.xy[peak.end, 0]), float(signal.xy[peak.end, 1])),
                peak_speed=peak_speed,
                distance_total=distance_total,
                distance_hi=distance_hi,
                is_hi=peak_speed >= config.hi_threshold_kmh,
            )
        )
    return runs

"""Pipeline configuration: every rule constant lives in this one record.

The config is serialized into the artifact-store manifest so results are
reproducible per config hash.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class PipelineConfig:
    # speed signal
    smoothing_window: int = 5                # samples, centered (0.5 s at 10 Hz)
    outlier_speed_kmh: float = 43.2          # 12 m/s; above recorded elite sprints
    max_gap_ms: int = 500                    # larger tracking gaps split the series

    # speed categories and run segmentation
    category_bounds_kmh: tuple[float, float, float] = (6.0, 14.0, 21.0)
    hi_threshold_kmh: float = 21.0           # >= counts as high intensity
    min_interval_ms: int = 500               # shorter constant-bin intervals get merged
    min_signal_ms: int = 1000                # shorter signals yield no runs

    # possession automaton
    regain_window_ms: int = 3000             # single opponent touch shorter than this is an instant regain
    flip_event_count: int = 2                # consecutive opponent events that flip possession

    # attack types
    set_piece_window_ms: int = 10000
    counter_window_ms: int = 12000
    counter_min_advance_m: float = 30.0
    long_pass_min_m: float = 30.0
    long_pass_origin_frac: float = 1.0 / 3.0  # pass must start in first third of pitch length

    # defense types
    high_press_hull_frac: float = 0.9        # hull-area share in the attacking team's half
    high_press_min_players: int = 3          # defenders in the attacking team's defensive third
    defense_min_frame_share: float = 0.5     # labeled-frame share below which the segment is Unknown

    # tactical geometry
    back_line_mode: str = "centroid"         # or "deepest": boundary of the Back zone
    moment_tolerance_ms: int = 200           # nearest-frame lookup window at run key moments

    # formations and roles
    formation_window_s: int = 600
    formation_stride_s: int = 60
    formation_phase: str = "out_of_possession"  # or "in_possession"
    min_window_phase_s: int = 60
    min_visibility_share: float = 0.5
    min_role_visibility_s: int = 60

    # valuation
    epv_tail_ms: int = 2000                  # window after the peak ends
    min_cell_samples: int = 10

    # aggregation
    min_role_minutes: float = 450.0
    min_role_peers: int = 5
    minute_rolling_window: int = 5

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["category_bounds_kmh"] = list(d["category_bounds_kmh"])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "category_bounds_kmh" in d:
            d = dict(d)
            d["category_bounds_kmh"] = tuple(d["category_bounds_kmh"])
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    def content_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


DEFAULT_CONFIG = PipelineConfig()

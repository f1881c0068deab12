"""Possession-value deltas for high-intensity runs and the influence regression.

A pluggable provider scores any in-play frame for the attacking team in
[0, 1]. Each HI run is valued between the end of its starting valley and two
seconds after its peak ends; samples crossing a possession change are
discarded. The pooled samples feed an OLS controlling for the angle and
distance to goal, with one coefficient per (player, role) cell.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, PipelineConfig
from .core import Frame, PitchSpec, Role, normalize_direction
from .kinematics import RunEffort
from .possession import PossessionSegment
from .regression import QrOls, RankDeficientError

__all__ = [
    "EpvProvider",
    "SurrogateEpv",
    "CsvEpv",
    "RunValueSample",
    "Discarded",
    "value_run",
    "RunInfluenceModel",
    "fit_influence",
    "RankDeficientError",
]


class EpvProvider(Protocol):
    """Possession-value model seam: deterministic per (frame, attacking team)."""

    def evaluate(self, frame: Frame, attacking_team: str) -> float: ...


class SurrogateEpv:
    """Documented logistic stand-in for an external possession-value model.

    value = sigmoid(-4 + 5 * x/L - 2 * |y - W/2| / (W/2)) with x measured in
    the attacking direction; monotone in ball progress toward the goal.
    """

    def __init__(self, pitch: PitchSpec = PitchSpec()):
        self.pitch = pitch

    def evaluate(self, frame: Frame, attacking_team: str) -> float:
        if not frame.in_play:
            raise ValueError("EPV is undefined for out-of-play frames")
        f = normalize_direction(frame, attacking_team, self.pitch)
        L, W = self.pitch.length, self.pitch.width
        z = -4.0 + 5.0 * (f.ball_x / L) - 2.0 * abs(f.ball_y - W / 2.0) / (W / 2.0)
        return 1.0 / (1.0 + math.exp(-z))


class CsvEpv:
    """File-backed provider: rows of (t_ms, team, value), nearest-t lookup."""

    def __init__(self, path: str | Path, tolerance_ms: int = 200):
        self.tolerance_ms = tolerance_ms
        series: dict[str, list[tuple[int, float]]] = {}
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                series.setdefault(row["team"], []).append(
                    (int(row["t_ms"]), float(row["value"]))
                )
        self._t = {team: np.array([t for t, _ in sorted(rows)]) for team, rows in series.items()}
        self._v = {team: np.array([v for _, v in sorted(rows)]) for team, rows in series.items()}

    def evaluate(self, frame: Frame, attacking_team: str) -> float:
        ts = self._t.get(attacking_team)
        if ts is None or len(ts) == 0:
            raise KeyError(f"no EPV series for team {attacking_team!r}")
        i = int(np.clip(np.searchsorted(ts, frame.t_ms), 1, len(ts) - 1))
        j = i - 1 if abs(int(ts[i - 1]) - frame.t_ms) <= abs(int(ts[i]) - frame.t_ms) else i
        if abs(int(ts[j]) - frame.t_ms) > self.tolerance_ms:
            raise LookupError(f"no EPV value within {self.tolerance_ms} ms of t={frame.t_ms}")
        return float(self._v[attacking_team][j])


@dataclass(frozen=True)
class RunValueSample:
    player_id: str
    team_id: str
    role: Role | None
    t_start: int          # end of the starting valley
    t_end: int            # peak end + tail window
    epv_start: float
    epv_end: float
    angle: float          # radians to the goal center from the run origin
    distance: float       # meters from the run origin to the goal center

    @property
    def epv_added(self) -> float:
        return self.epv_end - self.epv_start


@dataclass(frozen=True)
class Discarded:
    player_id: str
    t_start: int
    reason: str


def goal_geometry(
    origin: tuple[float, float], pitch: PitchSpec
) -> tuple[float, float]:
    """(angle, distance) to the +x goal center from a normalized origin.

    angle = atan2(|dy|, dx), which lands in [0, pi/2] anywhere on the pitch;
    an origin level with the goal line gets pi/2 by that convention.
    """
    gx, gy = pitch.goal_center_away
    dx = gx - origin[0]
    dy = abs(gy - origin[1])
    return math.atan2(dy, dx), math.hypot(dx, dy)


def value_run(
    run: RunEffort,
    team_id: str,
    frame_near,
    segments: Sequence[PossessionSegment],
    provider: EpvProvider,
    pitch: PitchSpec,
    role: Role | None = None,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> RunValueSample | Discarded:
    """Value one HI run or say why it was dropped.

    frame_near(t_ms) returns the Frame closest to t within the configured
    tolerance or raises LookupError. Both sampling moments must fall inside
    the same possession segment of the runner's team.
    """
    if not run.is_hi:
        return Discarded(run.player_id, run.t_valley_end, "not a high-intensity run")
    t1 = run.t_valley_end
    t2 = run.t_peak_end + config.epv_tail_ms
    seg = next((s for s in segments if s.t_start <= t1 < s.t_end), None)
    if seg is None or seg.team_id != team_id:
        return Discarded(run.player_id, t1, "run does not start in own possession")
    if t2 > seg.t_end:
        return Discarded(run.player_id, t1, "possession ends inside the value window")
    try:
        f1 = frame_near(t1)
        f2 = frame_near(t2)
    except LookupError as e:
        return Discarded(run.player_id, t1, f"missing frames: {e}")
    try:
        epv1 = provider.evaluate(f1, team_id)
        epv2 = provider.evaluate(f2, team_id)
    except (ValueError, KeyError, LookupError) as e:
        return Discarded(run.player_id, t1, f"provider: {e}")

    sign = f1.attacking.get(team_id, 1)
    origin = run.origin
    if sign < 0:
        origin = (pitch.length - origin[0], pitch.width - origin[1])
    angle, distance = goal_geometry(origin, pitch)
    return RunValueSample(
        player_id=run.player_id,
        team_id=team_id,
        role=role,
        t_start=t1,
        t_end=t2,
        epv_start=epv1,
        epv_end=epv2,
        angle=angle,
        distance=distance,
    )


Cell = tuple[str, str]  # (player_id, role value)


@dataclass(frozen=True)
class RunInfluenceModel:
    intercept: float
    angle_coef: float
    distance_coef: float
    cell_coefs: Mapping[Cell, float]
    stderr: Mapping[str, float]        # keyed like column names
    cell_stderr: Mapping[Cell, float]
    reference_cell: Cell
    n_samples: int
    sigma2: float

    def coefficient(self, player_id: str, role: Role | str) -> float:
        key = (player_id, role.value if isinstance(role, Role) else role)
        if key == self.reference_cell:
            return 0.0
        return self.cell_coefs[key]


def _cell_of(s: RunValueSample) -> Cell:
    role = s.role.value if s.role is not None else "unknown"
    return (s.player_id, role)


def fit_influence(
    samples: Sequence[RunValueSample],
    eligible_cells: set[Cell] | None = None,
    min_cell_samples: int = 10,
    drop_reference: bool = True,
) -> RunInfluenceModel:
    """OLS of epv_added on angle, distance, and (player, role) indicators.

    Cells need `min_cell_samples` samples (and, when given, membership in
    eligible_cells — the 450-minute filter computed upstream). The first cell
    in sorted order is the reference level absorbed by the intercept;
    disabling `drop_reference` reproduces the rank-deficient full-indicator
    design and raises RankDeficientError.
    """
    counts: dict[Cell, int] = {}
    for s in samples:
        counts[_cell_of(s)] = counts.get(_cell_of(s), 0) + 1
    cells = sorted(
        c
        for c, n in counts.items()
        if n >= min_cell_samples and (eligible_cells is None or c in eligible_cells)
    )
    if not cells:
        raise ValueError("no (player, role) cell satisfies the sample minimum")
    kept = [s for s in samples if _cell_of(s) in set(cells)]
    kept.sort(key=lambda s: (_cell_of(s), s.t_start, s.t_end))

    reference = cells[0]
    dummy_cells = cells[1:] if drop_reference else cells
    col_names = ["intercept", "angle", "distance"] + [
        f"player[{p}|{r}]" for p, r in dummy_cells
    ]
    n, p = len(kept), 3 + len(dummy_cells)
    X = np.zeros((n, p))
    y = np.empty(n)
    cell_col = {c: 3 + j for j, c in enumerate(dummy_cells)}
    for i, s in enumerate(kept):
        X[i, 0] = 1.0
        X[i, 1] = s.angle
        X[i, 2] = s.distance
        c = _cell_of(s)
        if c in cell_col:
            X[i, cell_col[c]] = 1.0
        y[i] = s.epv_added

    ols = QrOls(column_names=col_names).fit(X, y)
    coef, se = ols.coef_, ols.stderr_
    return RunInfluenceModel(
        intercept=float(coef[0]),
        angle_coef=float(coef[1]),
        distance_coef=float(coef[2]),
        cell_coefs={c: float(coef[j]) for c, j in cell_col.items()},
        stderr={name: float(s) for name, s in zip(col_names, se)},
        cell_stderr={c: float(se[j]) for c, j in cell_col.items()},
        reference_cell=reference,
        n_samples=n,
        sigma2=ols.sigma2_,
    )

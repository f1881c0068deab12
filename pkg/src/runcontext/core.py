"""Shared domain types and coordinate conventions.

Coordinate frame: origin at the home team's left corner post, x along the
pitch length, y along the width, units in meters. Analysis code normalizes
frames so the team under study attacks toward +x; the reflection used for
that is the point reflection (x, y) -> (L - x, W - y).

All types are immutable after construction and safe to share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum, IntEnum
from typing import Iterator, Mapping, Sequence

import numpy as np

FRAME_INTERVAL_MS = 100  # nominal 10 Hz spacing

DEFAULT_CATEGORY_BOUNDS = (6.0, 14.0, 21.0)  # km/h


class SpeedCategory(IntEnum):
    """Speed bands partitioning [0, inf) km/h; order matters."""

    WALKING = 0
    JOGGING = 1
    RUNNING = 2
    SPRINTING = 3


def speed_category(
    v_kmh: float, bounds: tuple[float, float, float] = DEFAULT_CATEGORY_BOUNDS
) -> SpeedCategory:
    """Map a speed in km/h to its category.

    Boundaries are closed on the faster side: 6 -> JOGGING, 21 -> SPRINTING,
    matching the >= convention used for high-intensity runs.
    """
    if v_kmh < 0:
        raise ValueError(f"speed must be non-negative, got {v_kmh}")
    b0, b1, b2 = bounds
    if not (b0 < b1 < b2):
        raise ValueError(f"category bounds must be strictly increasing, got {bounds}")
    if v_kmh < b0:
        return SpeedCategory.WALKING
    if v_kmh < b1:
        return SpeedCategory.JOGGING
    if v_kmh < b2:
        return SpeedCategory.RUNNING
    return SpeedCategory.SPRINTING


def speed_categories(
    v_kmh: np.ndarray, bounds: tuple[float, float, float] = DEFAULT_CATEGORY_BOUNDS
) -> np.ndarray:
    """Vectorized speed_category; returns int codes."""
    return np.searchsorted(np.asarray(bounds), np.asarray(v_kmh), side="right")


class Role(Enum):
    CENTRAL_DEFENDER = "central_defender"
    FULL_BACK = "full_back"
    DEFENSIVE_MIDFIELDER = "defensive_midfielder"
    MIDFIELDER = "midfielder"
    WINGER = "winger"
    STRIKER = "striker"
    GOALKEEPER = "goalkeeper"


class EventType(Enum):
    PASS = "pass"
    RECEPTION = "reception"
    CARRY = "carry"
    SHOT = "shot"
    CROSS = "cross"
    DRIBBLE = "dribble"
    RECOVERY = "recovery"
    FOUL = "foul"
    OFFSIDE = "offside"
    BALL_OUT = "ball_out"
    CORNER = "corner"
    FREE_KICK = "free_kick"
    THROW_IN = "throw_in"
    GOAL_KICK = "goal_kick"
    KICKOFF = "kickoff"
    SUBSTITUTION = "substitution"


# open-play on-ball touches driving the possession automaton
ON_BALL_TYPES = frozenset(
    {
        EventType.PASS,
        EventType.RECEPTION,
        EventType.CARRY,
        EventType.SHOT,
        EventType.CROSS,
        EventType.DRIBBLE,
        EventType.RECOVERY,
    }
)
# events that put the ball back in play and assign possession outright
RESTART_TYPES = frozenset(
    {
        EventType.CORNER,
        EventType.FREE_KICK,
        EventType.THROW_IN,
        EventType.GOAL_KICK,
        EventType.KICKOFF,
    }
)
# events that stop play
STOP_TYPES = frozenset({EventType.FOUL, EventType.OFFSIDE, EventType.BALL_OUT})


@dataclass(frozen=True)
class PitchSpec:
    """Pitch geometry; goal centers sit on the boundary at mid-width."""

    length: float = 105.0
    width: float = 68.0

    def __post_init__(self) -> None:
        if self.length <= 0 or self.width <= 0:
            raise ValueError("pitch dimensions must be positive")

    @property
    def goal_center_home(self) -> tuple[float, float]:
        return (0.0, self.width / 2.0)

    @property
    def goal_center_away(self) -> tuple[float, float]:
        return (self.length, self.width / 2.0)

    def contains(self, x: float, y: float, tol: float = 0.0) -> bool:
        return -tol <= x <= self.length + tol and -tol <= y <= self.width + tol


@dataclass(frozen=True)
class PlayerPosition:
    player_id: str
    team_id: str
    x: float
    y: float


@dataclass(frozen=True)
class Frame:
    """One 10 Hz snapshot: ball, visible players, per-team attack signs.

    t_ms counts milliseconds since kickoff of the frame's period. Missing
    players (broadcast occlusion) are simply absent from `players`.
    """

    t_ms: int
    period: int
    ball_x: float
    ball_y: float
    players: tuple[PlayerPosition, ...]
    attacking: Mapping[str, int]  # team_id -> +1 (toward +x) or -1
    in_play: bool = True

    def __post_init__(self) -> None:
        ids = [p.player_id for p in self.players]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate player_id in frame")
        per_team: dict[str, int] = {}
        for p in self.players:
            per_team[p.team_id] = per_team.get(p.team_id, 0) + 1
        for team, n in per_team.items():
            if n > 11:
                raise ValueError(f"team {team!r} has {n} players in frame")

    def team_players(self, team_id: str) -> tuple[PlayerPosition, ...]:
        return tuple(p for p in self.players if p.team_id == team_id)


@dataclass(frozen=True)
class Event:
    t_ms: int
    type: EventType
    team_id: str
    player_id: str
    x: float
    y: float
    end_x: float | None = None
    end_y: float | None = None


def normalize_direction(frame: Frame, team_id: str, pitch: PitchSpec) -> Frame:
    """Reflect the frame so `team_id` attacks toward +x. Idempotent."""
    if team_id not in frame.attacking:
        raise KeyError(f"unknown team id {team_id!r}")
    if frame.attacking[team_id] >= 0:
        return frame
    L, W = pitch.length, pitch.width
    players = tuple(
        PlayerPosition(p.player_id, p.team_id, L - p.x, W - p.y) for p in frame.players
    )
    attacking = {t: -s for t, s in frame.attacking.items()}
    return replace(
        frame,
        ball_x=L - frame.ball_x,
        ball_y=W - frame.ball_y,
        players=players,
        attacking=attacking,
    )


class TrackingSequence:
    """Columnar, immutable container for a contiguous span of frames.

    Player coordinates live in an (n_frames, n_players, 2) array with NaN
    marking occluded samples; this is what makes the full-match pipeline
    cheap. `Frame` objects are materialized views.
    """

    __slots__ = (
        "t_ms",
        "period",
        "ball",
        "in_play",
        "xy",
        "player_ids",
        "player_teams",
        "attack_sign_p1",
        "_index_of",
    )

    def __init__(
        self,
        t_ms: np.ndarray,
        period: np.ndarray,
        ball: np.ndarray,
        in_play: np.ndarray,
        xy: np.ndarray,
        player_ids: Sequence[str],
        player_teams: Sequence[str],
        attack_sign_p1: Mapping[str, int],
    ) -> None:
        self.t_ms = np.ascontiguousarray(t_ms, dtype=np.int64)
        self.period = np.ascontiguousarray(period, dtype=np.int16)
        self.ball = np.ascontiguousarray(ball, dtype=np.float64)
        self.in_play = np.ascontiguousarray(in_play, dtype=bool)
        self.xy = np.ascontiguousarray(xy, dtype=np.float64)
        self.player_ids = tuple(player_ids)
        self.player_teams = tuple(player_teams)
        self.attack_sign_p1 = dict(attack_sign_p1)
        if len(self.player_ids) != len(set(self.player_ids)):
            raise ValueError("duplicate player ids")
        if self.xy.shape != (len(self.t_ms), len(self.player_ids), 2):
            raise ValueError("xy shape mismatch")
        if np.any(np.diff(self.t_ms) < 0):
            raise ValueError("t_ms must be non-decreasing")
        for a in (self.t_ms, self.period, self.ball, self.in_play, self.xy):
            a.setflags(write=False)
        self._index_of = {pid: i for i, pid in enumerate(self.player_ids)}

    def __len__(self) -> int:
        return len(self.t_ms)

    def index_of(self, player_id: str) -> int:
        return self._index_of[player_id]

    def attack_sign(self, team_id: str, period: int) -> int:
        """Teams swap ends every period: odd periods keep the metadata sign."""
        base = self.attack_sign_p1[team_id]
        return base if period % 2 == 1 else -base

    def team_columns(self, team_id: str) -> np.ndarray:
        return np.array([i for i, t in enumerate(self.player_teams) if t == team_id])

    def frame_at(self, i: int) -> Frame:
        players = []
        for j, pid in enumerate(self.player_ids):
            x, y = self.xy[i, j]
            if not math.isnan(x):
                players.append(PlayerPosition(pid, self.player_teams[j], float(x), float(y)))
        period = int(self.period[i])
        attacking = {team: self.attack_sign(team, period) for team in self.attack_sign_p1}
        return Frame(
            t_ms=int(self.t_ms[i]),
            period=period,
            ball_x=float(self.ball[i, 0]),
            ball_y=float(self.ball[i, 1]),
            players=tuple(players),
            attacking=attacking,
            in_play=bool(self.in_play[i]),
        )

    def frames(self) -> Iterator[Frame]:
        for i in range(len(self)):
            yield self.frame_at(i)

    @classmethod
    def from_frames(
        cls, frames: Sequence[Frame], attack_sign_p1: Mapping[str, int] | None = None
    ) -> "TrackingSequence":
        if not frames:
            raise ValueError("empty frame sequence")
        ids: list[str] = []
        teams: list[str] = []
        seen: dict[str, int] = {}
        for f in frames:
            for p in f.players:
                if p.player_id not in seen:
                    seen[p.player_id] = len(ids)
                    ids.append(p.player_id)
                    teams.append(p.team_id)
        n, m = len(frames), len(ids)
        t_ms = np.empty(n, dtype=np.int64)
        period = np.empty(n, dtype=np.int16)
        ball = np.empty((n, 2))
        in_play = np.empty(n, dtype=bool)
        xy = np.full((n, m, 2), np.nan)
        for i, f in enumerate(frames):
            t_ms[i] = f.t_ms
            period[i] = f.period
            ball[i] = (f.ball_x, f.ball_y)
            in_play[i] = f.in_play
            for p in f.players:
                xy[i, seen[p.player_id]] = (p.x, p.y)
        if attack_sign_p1 is None:
            sign0: dict[str, int] = {}
            for f in frames:
                base = f.attacking if f.period % 2 == 1 else {t: -s for t, s in f.attacking.items()}
                sign0.update(base)
            attack_sign_p1 = sign0
        return cls(t_ms, period, ball, in_play, xy, ids, teams, attack_sign_p1)

"""Possession segmentation and attack/defense type classification.

The possession automaton is event-driven: a stoppage opens an out-of-play
span until the restart, and an opponent touch only flips possession when the
opponent strings two consecutive on-ball events together or keeps the ball
for the regain window — anything shorter is an instant regain and the
original possession continues. Restart events assign possession outright.

Segments tile the given timeline exactly, in integer milliseconds.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, PipelineConfig
from .core import ON_BALL_TYPES, RESTART_TYPES, STOP_TYPES, Event, EventType
from .geometry import hull_fraction_beyond_x


class AttackType(Enum):
    ORGANIZED = "organized"
    DIRECT_PLAY = "direct_play"
    COUNTER_ATTACK = "counter_attack"
    SET_PIECE = "set_piece"


class DefenseType(Enum):
    HIGH_PRESSURE = "high_pressure"
    MEDIUM_BLOCK = "medium_block"
    LOW_BLOCK = "low_block"
    UNKNOWN = "unknown"


class EndReason(Enum):
    BALL_OUT = "ball_out"
    REFEREE_STOP = "referee_stop"
    TURNOVER = "turnover"
    PERIOD_END = "period_end"


@dataclass(frozen=True)
class PossessionSegment:
    team_id: str | None  # None = out of play
    t_start: int
    t_end: int
    end_reason: EndReason
    attack_type: AttackType | None = None
    defense_type: DefenseType | None = None
    low_confidence: bool = False

    @property
    def duration_ms(self) -> int:
        return self.t_end - self.t_start

    @property
    def in_play(self) -> bool:
        return self.team_id is not None


def segment_possessions(
    events: Sequence[Event],
    t_start: int,
    t_end: int,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> list[PossessionSegment]:
    """Tile [t_start, t_end] into possession and out-of-play segments."""
    if t_end < t_start:
        raise ValueError("t_end before t_start")
    if t_end == t_start:
        return []
    evs = [e for e in events if t_start <= e.t_ms <= t_end]
    if any(evs[i].t_ms > evs[i + 1].t_ms for i in range(len(evs) - 1)):
        raise ValueError("events must be time-ordered")

    regain = config.regain_window_ms
    segments: list[PossessionSegment] = []
    cur_team: str | None = None
    cur_start = t_start
    established = False
    pending: tuple[str, int] | None = None

    def close(t: int, reason: EndReason) -> None:
        nonlocal cur_start
        if t > cur_start:
            segments.append(PossessionSegment(cur_team, cur_start, t, reason))
            cur_start = t

    def flip_to(team: str, t: int) -> None:
        nonlocal cur_team, established
        if not established:
            cur_team = team
            established = True
        elif team != cur_team:
            close(t, EndReason.TURNOVER)
            cur_team = team

    def resolve_pending(t_now: int) -> None:
        """A lone opponent touch flips retroactively once held >= the window."""
        nonlocal pending, cur_team
        if pending is None:
            return
        team, t_touch = pending
        if t_now - t_touch >= regain:
            close(t_touch, EndReason.TURNOVER)
            cur_team = team
        pending = None

    for e in evs:
        if e.type in STOP_TYPES:
            resolve_pending(e.t_ms)
            reason = EndReason.BALL_OUT if e.type == EventType.BALL_OUT else EndReason.REFEREE_STOP
            close(e.t_ms, reason)
            cur_team = None
        elif e.type in RESTART_TYPES:
            resolve_pending(e.t_ms)
            flip_to(e.team_id, e.t_ms)
        elif e.type in ON_BALL_TYPES:
            if cur_team is None:
                # open-play touch while out of play acts as an implicit restart
                flip_to(e.team_id, e.t_ms)
                pending = None
            elif e.team_id == cur_team:
                resolve_pending(e.t_ms)
                if cur_team != e.team_id:  # the resolve flipped away from us
                    pending = (e.team_id, e.t_ms)
            else:
                if pending is not None and pending[0] == e.team_id:
                    flip_to(e.team_id, pending[1])
                    pending = None
                else:
                    pending = (e.team_id, e.t_ms)
        # substitutions and other bookkeeping events do not touch possession

    if cur_team is not None:
        resolve_pending(t_end)
    close(t_end, EndReason.PERIOD_END)
    return segments


def effective_time_ms(segments: Sequence[PossessionSegment]) -> int:
    """Ball-in-play time: everything not out of play."""
    return sum(s.duration_ms for s in segments if s.in_play)


# --- attack types ---------------------------------------------------------

_SET_PIECE_TYPES = {EventType.CORNER, EventType.FREE_KICK, EventType.THROW_IN}
_PASS_TYPES = {EventType.PASS, EventType.CROSS}


@dataclass(frozen=True)
class AttackContext:
    """Per-match series the attack classifier reads.

    centroid_x maps team -> per-frame outfield centroid x in raw coordinates
    (NaN where not computable); sign_of(team, t_ms) gives the team's attack
    direction at that moment.
    """

    match_ms: np.ndarray
    ball_x: np.ndarray
    centroid_x: dict[str, np.ndarray]
    length: float
    sign_of: Callable[[str, int], int]


def _norm_x(x: float, sign: int, length: float) -> float:
    return x if sign > 0 else length - x


def _counter_qualifies(
    t0: int, t1: int, team: str, sign: int, ctx: AttackContext, config: PipelineConfig
) -> tuple[bool, bool]:
    """(qualifies, low_confidence): ball must advance and both blocks must
    cross halfway; without centroid data we fall back to ball-only rules."""
    i0, i1 = np.searchsorted(ctx.match_ms, (t0, t1))
    if i1 <= i0:
        return False, False
    bx = ctx.ball_x[i0:i1]
    if sign < 0:
        bx = ctx.length - bx
    advance = np.nanmax(bx) - bx[0] if len(bx) else 0.0
    if not advance >= config.counter_min_advance_m:
        return False, False
    half = ctx.length / 2.0
    crossed = []
    for cx in ctx.centroid_x.values():
        series = cx[i0:i1]
        series = series[~np.isnan(series)]
        if len(series) == 0:
            crossed.append(None)
            continue
        crossed.append(bool(np.nanmin(series) < half < np.nanmax(series)))
    if not crossed or any(c is None for c in crossed):
        return True, True  # ball-only decision
    return all(crossed), False


def attack_windows(
    segment: PossessionSegment,
    events: Sequence[Event],
    ctx: AttackContext,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> list[tuple[int, int, AttackType, bool]]:
    """Label sub-windows of one possession, precedence
    set-piece > counter > direct play > organized."""
    team = segment.team_id
    assert team is not None
    half = ctx.length / 2.0
    third = ctx.length * config.long_pass_origin_frac
    triggers: list[tuple[int, int, AttackType, bool]] = []
    for e in events:
        if not (segment.t_start <= e.t_ms < segment.t_end) or e.team_id != team:
            continue
        sign = ctx.sign_of(team, e.t_ms)
        if e.type in _SET_PIECE_TYPES:
            if _norm_x(e.x, sign, ctx.length) > half:
                t1 = min(e.t_ms + config.set_piece_window_ms, segment.t_end)
                triggers.append((e.t_ms, t1, AttackType.SET_PIECE, False))
        elif e.type == EventType.RECOVERY:
            if _norm_x(e.x, sign, ctx.length) < half:
                t1 = min(e.t_ms + config.counter_window_ms, segment.t_end)
                ok, low = _counter_qualifies(e.t_ms, t1, team, sign, ctx, config)
                if ok:
                    triggers.append((e.t_ms, t1, AttackType.COUNTER_ATTACK, low))
        elif e.type in _PASS_TYPES and e.end_x is not None:
            ox = _norm_x(e.x, sign, ctx.length)
            ex = _norm_x(e.end_x, sign, ctx.length)
            if ox < third and ex - ox >= config.long_pass_min_m:
                triggers.append((e.t_ms, segment.t_end, AttackType.DIRECT_PLAY, False))

    precedence = {
        AttackType.SET_PIECE: 3,
        AttackType.COUNTER_ATTACK: 2,
        AttackType.DIRECT_PLAY: 1,
        AttackType.ORGANIZED: 0,
    }
    cuts = {segment.t_start, segment.t_end}
    for t0, t1, _, _ in triggers:
        cuts.add(t0)
        cuts.add(t1)
    edges = sorted(cuts)
    windows: list[tuple[int, int, AttackType, bool]] = []
    for a, b in zip(edges, edges[1:]):
        label, low = AttackType.ORGANIZED, False
        for t0, t1, kind, lo in triggers:
            if t0 <= a and b <= t1 and precedence[kind] > precedence[label]:
                label, low = kind, lo
        if windows and windows[-1][2] == label and windows[-1][3] == low:
            windows[-1] = (windows[-1][0], b, label, low)
        else:
            windows.append((a, b, label, low))
    return windows


# --- defense types --------------------------------------------------------


@dataclass(frozen=True)
class DefenseView:
    """Defender coordinates of one team, x normalized so that team attacks +x
    (their own half is x <= L/2). y stays raw: the y-mirror is area-preserving
    per x-slice, so hull-area splits against vertical lines are unaffected."""

    match_ms: np.ndarray   # (n,)
    norm_x: np.ndarray     # (n, k) NaN = occluded
    y: np.ndarray          # (n, k)
    length: float


_UNLABELED, _LOW, _MEDIUM, _HIGH = -1, 0, 1, 2
_DEFENSE_CODE = {
    _LOW: DefenseType.LOW_BLOCK,
    _MEDIUM: DefenseType.MEDIUM_BLOCK,
    _HIGH: DefenseType.HIGH_PRESSURE,
}


def defense_frame_labels(view: DefenseView, config: PipelineConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Per-frame block-height code for every frame of the match.

    Vectorized fast paths (all defenders on one side of halfway) cover most
    frames; only hulls straddling the halfway line pay for a clip.
    """
    n, _ = view.norm_x.shape
    L = view.length
    half, last_third = L / 2.0, 2.0 * L / 3.0
    visible = ~np.isnan(view.norm_x)
    n_vis = visible.sum(axis=1)
    with np.errstate(all="ignore"):
        min_x = np.nanmin(np.where(visible, view.norm_x, np.inf), axis=1)
        max_x = np.nanmax(np.where(visible, view.norm_x, -np.inf), axis=1)
        beyond_third = np.nansum(view.norm_x > last_third, axis=1)

    labels = np.full(n, _UNLABELED, dtype=np.int8)
    ok = n_vis >= 3
    low = ok & (max_x <= half)
    fully_up = ok & (min_x >= half)
    labels[low] = _LOW
    press = fully_up & (beyond_third >= config.high_press_min_players)
    labels[fully_up] = np.where(press[fully_up], _HIGH, _MEDIUM)

    straddle = np.flatnonzero(ok & ~low & ~fully_up)
    frac_needed = config.high_press_hull_frac
    min_players = config.high_press_min_players
    if len(straddle):
        xs_block = view.norm_x[straddle].tolist()
        ys_block = view.y[straddle].tolist()
        vis_block = visible[straddle].tolist()
        b3_block = beyond_third[straddle].tolist()
        for row, i in enumerate(straddle):
            pts = [
                (x, y)
                for x, y, v in zip(xs_block[row], ys_block[row], vis_block[row])
                if v
            ]
            frac = hull_fraction_beyond_x(pts, half)
            if frac is None:
                continue
            if frac >= frac_needed and b3_block[row] >= min_players:
                labels[i] = _HIGH
            else:
                labels[i] = _MEDIUM
    return labels


def classify_defense_span(
    labels: np.ndarray,
    match_ms: np.ndarray,
    t0: int,
    t1: int,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> DefenseType:
    """Majority block-height over the span; ties and poor visibility degrade
    toward MEDIUM_BLOCK / UNKNOWN respectively."""
    i0, i1 = np.searchsorted(match_ms, (t0, t1))
    span = labels[i0:i1]
    if len(span) == 0:
        return DefenseType.UNKNOWN
    labeled = span[span != _UNLABELED]
    if len(labeled) < config.defense_min_frame_share * len(span):
        return DefenseType.UNKNOWN
    counts = {code: int(np.sum(labeled == code)) for code in (_LOW, _MEDIUM, _HIGH)}
    best = max(counts.values())
    winners = [code for code, c in counts.items() if c == best]
    if len(winners) > 1:
        return DefenseType.MEDIUM_BLOCK
    return _DEFENSE_CODE[winners[0]]


def annotate_segments(
    segments: Sequence[PossessionSegment],
    events: Sequence[Event],
    ctx: AttackContext,
    defense_labels: dict[str, np.ndarray],
    teams: Sequence[str],
    config: PipelineConfig = DEFAULT_CONFIG,
) -> list[PossessionSegment]:
    """Split possessions at attack-type changes and attach both type labels.

    defense_labels maps team -> per-frame codes from defense_frame_labels.
    """
    out: list[PossessionSegment] = []
    team_set = list(teams)
    for seg in segments:
        if not seg.in_play:
            out.append(seg)
            continue
        defender = next(t for t in team_set if t != seg.team_id)
        for t0, t1, attack, low in attack_windows(seg, events, ctx, config):
            defense = classify_defense_span(
                defense_labels[defender], ctx.match_ms, t0, t1, config
            )
            # sub-segments of one possession share its end_reason; keep the
            # unsplit list around when counting actual possession endings
            out.append(
                replace(
                    seg,
                    t_start=t0,
                    t_end=t1,
                    attack_type=attack,
                    defense_type=defense,
                    low_confidence=low,
                )
            )
    return out

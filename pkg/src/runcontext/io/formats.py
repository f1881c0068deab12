"""Open file formats and match assembly.

Tracking is JSON Lines, one frame per line:
    {"t": <ms>, "period": 1, "ball": [x, y], "in_play": true,
     "players": [{"id": "p1", "team": "h", "xy": [x, y]}, ...]}
Events are a JSON array of records mirroring the Event type; metadata is a
JSON object with rosters, pitch spec, and first-period kickoff directions.

Frame timestamps count from each period's kickoff; event timestamps use the
cumulative match timeline. MatchView glues both together.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..config import DEFAULT_CONFIG, PipelineConfig
from ..core import (
    FRAME_INTERVAL_MS,
    Event,
    EventType,
    Frame,
    PitchSpec,
    PlayerPosition,
    TrackingSequence,
)

EVENT_BOUNDS_TOL_M = 2.0


class IngestError(ValueError):
    pass


# --- tracking -------------------------------------------------------------


def write_tracking(path: str | Path, sequences: Iterable[TrackingSequence]) -> None:
    with open(path, "w") as fh:
        for seq in sequences:
            n = len(seq)
            visible = ~np.isnan(seq.xy[:, :, 0])
            for i in range(n):
                players = [
                    {
                        "id": seq.player_ids[j],
                        "team": seq.player_teams[j],
                        "xy": [float(seq.xy[i, j, 0]), float(seq.xy[i, j, 1])],
                    }
                    for j in np.flatnonzero(visible[i])
                ]
                rec = {
                    "t": int(seq.t_ms[i]),
                    "period": int(seq.period[i]),
                    "ball": [float(seq.ball[i, 0]), float(seq.ball[i, 1])],
                    "in_play": bool(seq.in_play[i]),
                    "players": players,
                }
                fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def read_tracking(
    path: str | Path,
    attack_sign_p1: dict[str, int],
    pitch: PitchSpec | None = None,
    config: PipelineConfig = DEFAULT_CONFIG,
    lint: list[str] | None = None,
) -> list[TrackingSequence]:
    """Parse tracking JSONL into sequences, splitting on period changes and
    frame gaps beyond the configured tolerance. Appends findings to `lint`."""
    lint = lint if lint is not None else []
    rows: list[dict] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                rows.append(
                    {
                        "t": int(rec["t"]),
                        "period": int(rec["period"]),
                        "ball": (float(rec["ball"][0]), float(rec["ball"][1])),
                        "in_play": bool(rec.get("in_play", True)),
                        "players": rec.get("players", []),
                        "lineno": lineno,
                    }
                )
            except (KeyError, TypeError, ValueError, IndexError) as e:
                raise IngestError(f"{path}: malformed tracking line {lineno}: {e}") from e
    if not rows:
        raise IngestError(f"{path}: no frames")

    # collect roster
    ids: list[str] = []
    teams: list[str] = []
    col: dict[str, int] = {}
    for r in rows:
        for p in r["players"]:
            pid = str(p["id"])
            if pid not in col:
                col[pid] = len(ids)
                ids.append(pid)
                teams.append(str(p["team"]))

    # split into contiguous chunks
    chunks: list[list[dict]] = [[rows[0]]]
    for prev, cur in zip(rows, rows[1:]):
        gap = cur["t"] - prev["t"]
        if cur["period"] != prev["period"]:
            chunks.append([cur])
        elif gap > config.max_gap_ms:
            lint.append(
                f"line {cur['lineno']}: {gap} ms frame gap exceeds {config.max_gap_ms} ms; sequence split"
            )
            chunks.append([cur])
        else:
            if gap != FRAME_INTERVAL_MS:
                lint.append(f"line {cur['lineno']}: irregular frame spacing of {gap} ms")
            chunks[-1].append(cur)

    sequences = []
    for chunk in chunks:
        n, m = len(chunk), len(ids)
        t_ms = np.empty(n, dtype=np.int64)
        period = np.empty(n, dtype=np.int16)
        ball = np.empty((n, 2))
        in_play = np.empty(n, dtype=bool)
        xy = np.full((n, m, 2), np.nan)
        for i, r in enumerate(chunk):
            t_ms[i] = r["t"]
            period[i] = r["period"]
            ball[i] = r["ball"]
            in_play[i] = r["in_play"]
            seen: set[str] = set()
            for p in r["players"]:
                pid = str(p["id"])
                if pid in seen:
                    lint.append(f"line {r['lineno']}: duplicate player id {pid!r}; first kept")
                    continue
                seen.add(pid)
                x, y = float(p["xy"][0]), float(p["xy"][1])
                if pitch is not None and not pitch.contains(x, y, tol=EVENT_BOUNDS_TOL_M):
                    lint.append(
                        f"line {r['lineno']}: player {pid!r} at ({x:.1f}, {y:.1f}) outside pitch"
                    )
                xy[i, col[pid]] = (x, y)
        sequences.append(
            TrackingSequence(t_ms, period, ball, in_play, xy, ids, teams, attack_sign_p1)
        )
    return sequences


# --- events ---------------------------------------------------------------


def write_events(path: str | Path, events: Sequence[Event]) -> None:
    recs = []
    for e in events:
        rec = {
            "t_ms": e.t_ms,
            "type": e.type.value,
            "team_id": e.team_id,
            "player_id": e.player_id,
            "location": [e.x, e.y],
        }
        if e.end_x is not None:
            rec["end_location"] = [e.end_x, e.end_y]
        recs.append(rec)
    Path(path).write_text(json.dumps(recs, indent=1) + "\n")


def read_events(path: str | Path, pitch: PitchSpec | None = None) -> list[Event]:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise IngestError(f"{path}: invalid events JSON: {e}") from e
    if not isinstance(raw, list):
        raise IngestError(f"{path}: events file must be a JSON array")
    events = []
    for i, rec in enumerate(raw):
        try:
            end = rec.get("end_location")
            e = Event(
                t_ms=int(rec["t_ms"]),
                type=EventType(rec["type"]),
                team_id=str(rec["team_id"]),
                player_id=str(rec["player_id"]),
                x=float(rec["location"][0]),
                y=float(rec["location"][1]),
                end_x=float(end[0]) if end else None,
                end_y=float(end[1]) if end else None,
            )
        except (KeyError, TypeError, ValueError, IndexError) as err:
            raise IngestError(f"{path}: malformed event record {i}: {err}") from err
        if pitch is not None and not pitch.contains(e.x, e.y, tol=EVENT_BOUNDS_TOL_M):
            raise IngestError(
                f"{path}: event {i} location ({e.x:.1f}, {e.y:.1f}) outside pitch (+{EVENT_BOUNDS_TOL_M} m)"
            )
        events.append(e)
    if any(events[i].t_ms > events[i + 1].t_ms for i in range(len(events) - 1)):
        raise IngestError(f"{path}: events are not time-ordered")
    return events


# --- metadata -------------------------------------------------------------


@dataclass(frozen=True)
class MatchMeta:
    match_id: str
    pitch: PitchSpec
    rosters: dict[str, tuple[str, ...]]       # team -> player ids
    goalkeepers: frozenset[str]
    attack_sign_p1: dict[str, int]            # first-period attack direction

    @property
    def teams(self) -> tuple[str, ...]:
        return tuple(sorted(self.rosters))


def write_meta(path: str | Path, meta: MatchMeta) -> None:
    rec = {
        "match_id": meta.match_id,
        "pitch": {"length": meta.pitch.length, "width": meta.pitch.width},
        "teams": {
            t: {"players": list(ps), "goalkeepers": [p for p in ps if p in meta.goalkeepers]}
            for t, ps in meta.rosters.items()
        },
        "attacking_direction_first_period": dict(meta.attack_sign_p1),
    }
    Path(path).write_text(json.dumps(rec, indent=1) + "\n")


def read_meta(path: str | Path) -> MatchMeta:
    try:
        rec = json.loads(Path(path).read_text())
        pitch = PitchSpec(float(rec["pitch"]["length"]), float(rec["pitch"]["width"]))
        rosters = {t: tuple(v["players"]) for t, v in rec["teams"].items()}
        gks = frozenset(p for v in rec["teams"].values() for p in v.get("goalkeepers", []))
        signs = {t: int(s) for t, s in rec["attacking_direction_first_period"].items()}
        return MatchMeta(str(rec["match_id"]), pitch, rosters, gks, signs)
    except (KeyError, TypeError, ValueError) as e:
        raise IngestError(f"{path}: malformed metadata: {e}") from e


# --- bundle and merged view -----------------------------------------------


@dataclass
class MatchBundle:
    meta: MatchMeta
    sequences: list[TrackingSequence]
    events: list[Event]
    lint: list[str] = field(default_factory=list)

    @property
    def match_id(self) -> str:
        return self.meta.match_id


def ingest(
    tracking_path: str | Path,
    events_path: str | Path,
    meta_path: str | Path,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> MatchBundle:
    """Schema-validate the three files into a bundle with a lint report."""
    meta = read_meta(meta_path)
    lint: list[str] = []
    sequences = read_tracking(
        tracking_path, meta.attack_sign_p1, meta.pitch, config, lint
    )
    events = read_events(events_path, meta.pitch)
    known = {p for ps in meta.rosters.values() for p in ps}
    for seq in sequences:
        for pid in seq.player_ids:
            if pid not in known:
                lint.append(f"tracked player {pid!r} missing from rosters")
    period_end: dict[int, int] = {}
    for seq in sequences:
        for p in np.unique(seq.period):
            t_max = int(seq.t_ms[seq.period == p].max())
            period_end[int(p)] = max(period_end.get(int(p), 0), t_max)
    match_span = sum(t + FRAME_INTERVAL_MS for t in period_end.values())
    for e in events:
        if e.team_id not in meta.rosters:
            raise IngestError(f"event references unknown team {e.team_id!r}")
        if not 0 <= e.t_ms <= match_span:
            raise IngestError(
                f"event at t={e.t_ms} ms lies outside the tracked match span of {match_span} ms"
            )
    return MatchBundle(meta, sequences, events, lint)


class MatchView:
    """Single-timeline arrays over all sequences of a match.

    match_ms is cumulative across periods (period k starts where k-1 ended,
    plus one frame interval). Frame views materialized here carry match_ms in
    their t_ms field — the cumulative stamp is what providers and downstream
    lookups key on; per-period stamps live only in the tracking files.
    """

    def __init__(self, bundle: MatchBundle):
        seqs = bundle.sequences
        if not seqs:
            raise ValueError("bundle has no tracking data")
        self.meta = bundle.meta
        self.pitch = bundle.meta.pitch
        self.events = bundle.events

        ids: list[str] = []
        teams: list[str] = []
        col: dict[str, int] = {}
        for seq in seqs:
            for pid, team in zip(seq.player_ids, seq.player_teams):
                if pid not in col:
                    col[pid] = len(ids)
                    ids.append(pid)
                    teams.append(team)
        self.player_ids = tuple(ids)
        self.player_teams = tuple(teams)

        periods = sorted({int(p) for seq in seqs for p in np.unique(seq.period)})
        offset: dict[int, int] = {}
        acc = 0
        for p in periods:
            offset[p] = acc
            p_end = max(
                int(seq.t_ms[seq.period == p].max())
                for seq in seqs
                if np.any(seq.period == p)
            )
            acc += p_end + FRAME_INTERVAL_MS
        self.period_offset = offset

        n = sum(len(s) for s in seqs)
        m = len(ids)
        self.match_ms = np.empty(n, dtype=np.int64)
        self.period = np.empty(n, dtype=np.int16)
        self.t_ms = np.empty(n, dtype=np.int64)
        self.ball = np.empty((n, 2))
        self.in_play = np.empty(n, dtype=bool)
        self.xy = np.full((n, m, 2), np.nan)
        pos = 0
        for seq in seqs:
            k = len(seq)
            sl = slice(pos, pos + k)
            offs = np.array([offset[int(p)] for p in seq.period], dtype=np.int64)
            self.match_ms[sl] = seq.t_ms + offs
            self.t_ms[sl] = seq.t_ms
            self.period[sl] = seq.period
            self.ball[sl] = seq.ball
            self.in_play[sl] = seq.in_play
            cols = [col[pid] for pid in seq.player_ids]
            self.xy[sl][:, cols, :] = seq.xy
            pos += k
        order = np.argsort(self.match_ms, kind="stable")
        for name in ("match_ms", "t_ms", "period", "ball", "in_play", "xy"):
            setattr(self, name, np.ascontiguousarray(getattr(self, name)[order]))
        self.attack_sign_p1 = dict(bundle.meta.attack_sign_p1)
        self._col = col

    def __len__(self) -> int:
        return len(self.match_ms)

    @property
    def match_id(self) -> str:
        return self.meta.match_id

    @property
    def t_start(self) -> int:
        return int(self.match_ms[0])

    @property
    def t_end(self) -> int:
        return int(self.match_ms[-1]) + FRAME_INTERVAL_MS

    def attack_sign(self, team_id: str, period: int) -> int:
        base = self.attack_sign_p1[team_id]
        return base if period % 2 == 1 else -base

    def sign_at(self, team_id: str, match_t: int) -> int:
        i = self.index_near(match_t, tolerance_ms=None)
        return self.attack_sign(team_id, int(self.period[i]))

    def column(self, player_id: str) -> int:
        return self._col[player_id]

    def team_columns(self, team_id: str, outfield_only: bool = False) -> list[int]:
        gks = self.meta.goalkeepers
        return [
            j
            for j, (pid, t) in enumerate(zip(self.player_ids, self.player_teams))
            if t == team_id and not (outfield_only and pid in gks)
        ]

    def index_near(self, match_t: int, tolerance_ms: int | None = 200) -> int:
        i = int(np.clip(np.searchsorted(self.match_ms, match_t), 1, len(self.match_ms) - 1))
        j = i - 1 if abs(int(self.match_ms[i - 1]) - match_t) <= abs(int(self.match_ms[i]) - match_t) else i
        if tolerance_ms is not None and abs(int(self.match_ms[j]) - match_t) > tolerance_ms:
            raise LookupError(f"no frame within {tolerance_ms} ms of match t={match_t}")
        return j

    def frame_at(self, i: int) -> Frame:
        players = []
        for j, pid in enumerate(self.player_ids):
            x = self.xy[i, j, 0]
            if not math.isnan(x):
                players.append(
                    PlayerPosition(pid, self.player_teams[j], float(x), float(self.xy[i, j, 1]))
                )
        period = int(self.period[i])
        attacking = {t: self.attack_sign(t, period) for t in self.meta.teams}
        return Frame(
            t_ms=int(self.match_ms[i]),
            period=period,
            ball_x=float(self.ball[i, 0]),
            ball_y=float(self.ball[i, 1]),
            players=tuple(players),
            attacking=attacking,
            in_play=bool(self.in_play[i]),
        )

    def frame_near(self, match_t: int, tolerance_ms: int = 200) -> Frame:
        return self.frame_at(self.index_near(match_t, tolerance_ms))

"""Deterministic scripted-match generator with ground-truth labels.

Scripts declare player move directives (trapezoidal speed profiles along a
heading), formation placements that carry ten outfield players around an
anchor path, a ball waypoint track, an event schedule, and intended
possession spans. Everything the pipeline later infers — runs with their key
moments, possession segments, attack labels, roles — is computed analytically
here and returned as GroundTruth, so tests never assert values they did not
construct.

Same script + same seed => byte-identical output files.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
import numpy as np

from .config import DEFAULT_CONFIG, PipelineConfig
from .core import (
    FRAME_INTERVAL_MS,
    Event,
    EventType,
    PitchSpec,
    Role,
    TrackingSequence,
)
from .formations import DEFAULT_TEMPLATES, FormationTemplate, simplify_role
from .io.formats import MatchBundle, MatchMeta, write_events, write_meta, write_tracking

KMH_TO_MS = 1.0 / 3.6


class ScriptError(ValueError):
    """Raised with the first violated script constraint."""


@dataclass(frozen=True)
class Move:
    """One trapezoidal effort: accelerate to cruise, hold, decelerate to rest.

    distance_m covers all three phases; headings are degrees, 0 = +x.
    """

    t_start_s: float
    heading_deg: float
    cruise_kmh: float
    distance_m: float
    accel: float = 3.0
    decel: float = 3.0

    def phases(self) -> tuple[float, float, float, float, float]:
        """(t_acc, t_cruise, t_dec, d_acc, d_dec), raising on inconsistency."""
        v = self.cruise_kmh * KMH_TO_MS
        if v <= 0:
            raise ScriptError(f"cruise speed must be positive, got {self.cruise_kmh}")
        t_acc, t_dec = v / self.accel, v / self.decel
        d_acc, d_dec = 0.5 * v * t_acc, 0.5 * v * t_dec
        d_cruise = self.distance_m - d_acc - d_dec
        if d_cruise < -1e-9:
            raise ScriptError(
                f"move at t={self.t_start_s}: distance {self.distance_m} m too short "
                f"for accel/decel phases ({d_acc + d_dec:.1f} m)"
            )
        return t_acc, max(d_cruise, 0.0) / v, t_dec, d_acc, d_dec

    @property
    def duration_s(self) -> float:
        t_acc, t_cruise, t_dec, _, _ = self.phases()
        return t_acc + t_cruise + t_dec


@dataclass(frozen=True)
class PlayerScript:
    player_id: str
    team: str
    start: tuple[float, float]
    moves: tuple[Move, ...] = ()
    goalkeeper: bool = False
    jitter_m: float = 0.0   # uniform per-frame position noise
    enter_s: float = 0.0
    exit_s: float | None = None


@dataclass(frozen=True)
class FormationPlacement:
    """Ten outfield players pinned to template slots around a moving anchor."""

    team: str
    template: str
    players: tuple[str, ...]                 # slot order
    anchor_path: tuple[tuple[float, float, float], ...]  # (t_s, x, y)
    spread: float = 1.0
    noise_m: float = 0.0                     # gaussian, per frame per player
    from_s: float = 0.0
    to_s: float | None = None


@dataclass(frozen=True)
class EventSpec:
    t_s: float
    type: str
    team: str
    player: str
    loc: tuple[float, float]
    end_loc: tuple[float, float] | None = None


@dataclass(frozen=True)
class PossessionSpan:
    team: str | None          # None = out of play
    t0_s: float
    t1_s: float
    attack: str | None = None  # intended attack type for the whole span


@dataclass(frozen=True)
class Script:
    seed: int
    duration_s: float
    pitch: PitchSpec = PitchSpec()
    players: tuple[PlayerScript, ...] = ()
    formations: tuple[FormationPlacement, ...] = ()
    ball_waypoints: tuple[tuple[float, float, float], ...] = ()
    events: tuple[EventSpec, ...] = ()
    possession: tuple[PossessionSpan, ...] = ()
    attack_sign_p1: dict[str, int] = field(default_factory=lambda: {"h": 1, "a": -1})
    match_id: str = "synthetic"


@dataclass(frozen=True)
class TruthRun:
    player_id: str
    t_valley_end: int
    t_peak_start: int
    t_peak_end: int
    t_next_valley_start: int
    peak_kmh: float
    is_hi: bool


@dataclass(frozen=True)
class TruthSpan:
    team: str | None
    t0_ms: int
    t1_ms: int
    attack: str | None


@dataclass(frozen=True)
class GroundTruth:
    runs: dict[str, list[TruthRun]]
    possession: list[TruthSpan]
    roles: dict[str, str]
    formations: dict[str, list[tuple[int, int, str]]]


@dataclass
class SynthMatch:
    script: Script
    meta: MatchMeta
    sequences: list[TrackingSequence]
    events: list[Event]
    truth: GroundTruth

    def bundle(self) -> MatchBundle:
        return MatchBundle(self.meta, self.sequences, self.events)

    def write(self, out_dir: str | Path) -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "tracking": out / "tracking.jsonl",
            "events": out / "events.json",
            "meta": out / "meta.json",
            "truth": out / "truth.json",
        }
        write_tracking(paths["tracking"], self.sequences)
        write_events(paths["events"], self.events)
        write_meta(paths["meta"], self.meta)
        paths["truth"].write_text(json.dumps(_truth_to_dict(self.truth), indent=1, sort_keys=True))
        return paths


def _truth_to_dict(t: GroundTruth) -> dict:
    return {
        "runs": {
            pid: [vars(r) for r in runs] for pid, runs in sorted(t.runs.items())
        },
        "possession": [vars(s) for s in t.possession],
        "roles": dict(sorted(t.roles.items())),
        "formations": t.formations,
    }


def _template_by_name(name: str) -> FormationTemplate:
    for t in DEFAULT_TEMPLATES:
        if t.name == name:
            return t
    raise ScriptError(f"unknown formation template {name!r}")


_CATEGORY_BOUNDS = (6.0, 14.0, 21.0)


def _cruise_bin_floor(cruise_kmh: float) -> float | None:
    floor = None
    for b in _CATEGORY_BOUNDS:
        if cruise_kmh >= b:
            floor = b
    return floor


def validate(script: Script) -> None:
    """Check physical and schedule consistency; raises ScriptError."""
    if script.duration_s < 0:
        raise ScriptError("duration must be >= 0")
    pitch = script.pitch
    ids: set[str] = set()
    for p in script.players:
        if p.player_id in ids:
            raise ScriptError(f"duplicate player id {p.player_id!r}")
        ids.add(p.player_id)
        prev_end = None
        for mv in p.moves:
            t_end = mv.t_start_s + mv.duration_s  # phases() validates geometry
            if mv.cruise_kmh > 43.2:
                raise ScriptError(
                    f"{p.player_id}: cruise {mv.cruise_kmh} km/h exceeds the physical cap"
                )
            if mv.t_start_s < p.enter_s or (p.exit_s is not None and t_end > p.exit_s):
                raise ScriptError(f"{p.player_id}: move outside the on-pitch window")
            if t_end > script.duration_s + 1e-9:
                raise ScriptError(f"{p.player_id}: move ends after the match")
            if prev_end is not None and mv.t_start_s < prev_end:
                raise ScriptError(f"{p.player_id}: overlapping moves")
            if mv.cruise_kmh >= _CATEGORY_BOUNDS[0]:
                # run-producing moves need clean interval structure
                _, t_cruise, _, _, _ = mv.phases()
                if t_cruise < 0.6:
                    raise ScriptError(
                        f"{p.player_id}: cruise phase {t_cruise:.2f} s too short for a stable peak"
                    )
                if prev_end is not None and mv.t_start_s - prev_end < 1.0:
                    raise ScriptError(f"{p.player_id}: rest between moves shorter than 1 s")
            prev_end = t_end
    placed: dict[str, list[tuple[float, float]]] = {}
    for fp in script.formations:
        if len(fp.players) != 10:
            raise ScriptError(f"placement for {fp.team}: need 10 outfield players")
        window = (fp.from_s, fp.to_s if fp.to_s is not None else script.duration_s)
        for pid in fp.players:
            # players may move between placements only in disjoint windows;
            # scripted moves overlay whatever placement is active
            for w0, w1 in placed.get(pid, ()):
                if window[0] < w1 and w0 < window[1]:
                    raise ScriptError(f"player {pid!r} is in two overlapping placements")
            placed.setdefault(pid, []).append(window)
        tpl = _template_by_name(fp.template)
        offsets = (tpl.points() - tpl.points().mean(axis=0)) * fp.spread
        for _, ax, ay in fp.anchor_path:
            for ox, oy in offsets:
                if not pitch.contains(ax + ox, ay + oy, tol=1.0):
                    raise ScriptError(
                        f"placement for {fp.team}: slot leaves the pitch at anchor ({ax}, {ay})"
                    )
    for e in script.events:
        EventType(e.type)
        if not 0 <= e.t_s <= script.duration_s:
            raise ScriptError(f"event at t={e.t_s}s outside the match")
        if not pitch.contains(e.loc[0], e.loc[1], tol=2.0):
            raise ScriptError(f"event at t={e.t_s}s located off the pitch")
    last = 0.0
    for span in script.possession:
        if span.t0_s < last - 1e-9 or span.t1_s <= span.t0_s:
            raise ScriptError("possession spans must be ascending and non-empty")
        if span.t1_s > script.duration_s + 1e-9:
            raise ScriptError("possession span ends after the match")
        last = span.t1_s
        if span.attack == "set_piece":
            if not any(
                ev.team == span.team
                and ev.type in ("corner", "free_kick", "throw_in")
                and abs(ev.t_s - span.t0_s) < 1e-6
                for ev in script.events
            ):
                raise ScriptError("set-piece span lacks its restart event at span start")
        if span.attack == "counter_attack":
            if not any(
                ev.team == span.team and ev.type == "recovery" and abs(ev.t_s - span.t0_s) < 1e-6
                for ev in script.events
            ):
                raise ScriptError("counter-attack span lacks a recovery event at span start")


def _move_displacement(move: Move, t_s: np.ndarray) -> np.ndarray:
    """Displacement along the heading at the given absolute times."""
    v = move.cruise_kmh * KMH_TO_MS
    t_acc, t_cruise, t_dec, d_acc, d_dec = move.phases()
    tau = t_s - move.t_start_s
    total = move.distance_m
    out = np.zeros_like(tau)
    in_acc = (tau >= 0) & (tau < t_acc)
    out[in_acc] = 0.5 * move.accel * tau[in_acc] ** 2
    in_cruise = (tau >= t_acc) & (tau < t_acc + t_cruise)
    out[in_cruise] = d_acc + v * (tau[in_cruise] - t_acc)
    in_dec = (tau >= t_acc + t_cruise) & (tau < t_acc + t_cruise + t_dec)
    td = tau[in_dec] - t_acc - t_cruise
    out[in_dec] = d_acc + v * t_cruise - d_dec + (v * td - 0.5 * move.decel * td**2) + d_dec
    out[tau >= t_acc + t_cruise + t_dec] = total
    return out


def _model_smooth_kmh(move: Move, t: float) -> float:
    """The measured, smoothed speed at time t for this move, from closed form.

    Chord speeds over 100 ms windows equal displacement differences for
    straight-line motion, and the centered 5-sample mean is applied on top —
    exactly the documented measurement chain, evaluated analytically.
    """
    offsets = (-0.2, -0.1, 0.0, 0.1, 0.2)
    ts = np.array([t + o for o in offsets])
    disp_now = _move_displacement(move, ts)
    disp_prev = _move_displacement(move, ts - 0.1)
    return float(np.mean(disp_now - disp_prev)) * 36.0  # m per 100 ms -> km/h


def _crossing_s(move: Move, level_kmh: float, rising: bool) -> float:
    """Bisect the smoothed-speed crossing of a category boundary."""
    t_acc, t_cruise, t_dec, _, _ = move.phases()
    if rising:
        lo, hi = move.t_start_s - 0.6, move.t_start_s + t_acc + 0.4
    else:
        t_dec_start = move.t_start_s + t_acc + t_cruise
        lo, hi = t_dec_start - 0.4, t_dec_start + t_dec + 0.6
    f = (lambda t: _model_smooth_kmh(move, t) - level_kmh) if rising else (
        lambda t: level_kmh - _model_smooth_kmh(move, t)
    )
    assert f(lo) < 0 < f(hi), "boundary level outside the move's speed range"
    for _ in range(50):
        mid = (lo + hi) / 2.0
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def _truth_for_move(move: Move, hi_threshold: float) -> TruthRun | None:
    """Key moments as smoothed category-boundary crossings of the trapezoid."""
    floor = _cruise_bin_floor(move.cruise_kmh)
    if floor is None:
        return None  # never leaves the walking band: no run
    walking_bound = _CATEGORY_BOUNDS[0]
    return TruthRun(
        player_id="",
        t_valley_end=round(_crossing_s(move, walking_bound, rising=True) * 1000),
        t_peak_start=round(_crossing_s(move, floor, rising=True) * 1000),
        t_peak_end=round(_crossing_s(move, floor, rising=False) * 1000),
        t_next_valley_start=round(_crossing_s(move, walking_bound, rising=False) * 1000),
        peak_kmh=move.cruise_kmh,
        is_hi=move.cruise_kmh >= hi_threshold,
    )


def generate(script: Script, config: PipelineConfig = DEFAULT_CONFIG) -> SynthMatch:
    validate(script)
    pitch = script.pitch
    n = int(round(script.duration_s * 1000 / FRAME_INTERVAL_MS))
    rng = np.random.default_rng(script.seed)

    rosters: dict[str, list[str]] = {}
    gks: set[str] = set()
    columns: list[tuple[str, str]] = []  # (player_id, team)

    positions: dict[str, np.ndarray] = {}
    visible: dict[str, np.ndarray] = {}
    t_s = np.arange(n) * (FRAME_INTERVAL_MS / 1000.0)

    truth_runs: dict[str, list[TruthRun]] = {}
    roles: dict[str, str] = {}
    formations_truth: dict[str, list[tuple[int, int, str]]] = {}

    move_disp: dict[str, np.ndarray] = {}
    for p in script.players:
        disp = np.zeros((n, 2))
        for mv in p.moves:
            u = np.array(
                [math.cos(math.radians(mv.heading_deg)), math.sin(math.radians(mv.heading_deg))]
            )
            disp += u[None, :] * _move_displacement(mv, t_s)[:, None]
            tr = _truth_for_move(mv, config.hi_threshold_kmh)
            if tr is not None:
                truth_runs.setdefault(p.player_id, []).append(
                    TruthRun(
                        p.player_id,
                        tr.t_valley_end,
                        tr.t_peak_start,
                        tr.t_peak_end,
                        tr.t_next_valley_start,
                        tr.peak_kmh,
                        tr.is_hi,
                    )
                )
        move_disp[p.player_id] = disp
        pos = np.asarray(p.start, dtype=np.float64)[None, :] + disp
        if p.jitter_m > 0:
            pos = pos + rng.uniform(-p.jitter_m, p.jitter_m, size=(n, 2))
        vis = (t_s >= p.enter_s) & (t_s <= (p.exit_s if p.exit_s is not None else np.inf))
        positions[p.player_id] = pos
        visible[p.player_id] = vis
        rosters.setdefault(p.team, []).append(p.player_id)
        columns.append((p.player_id, p.team))
        if p.goalkeeper:
            gks.add(p.player_id)
            roles[p.player_id] = Role.GOALKEEPER.value

    for fp in script.formations:
        tpl = _template_by_name(fp.template)
        offsets = (tpl.points() - tpl.points().mean(axis=0)) * fp.spread
        sign = script.attack_sign_p1.get(fp.team, 1)
        if sign < 0:
            offsets = -offsets  # canvas assumes attacking +x
        wp = sorted(fp.anchor_path)
        wt = np.array([w[0] for w in wp])
        wx = np.array([w[1] for w in wp])
        wy = np.array([w[2] for w in wp])
        ax = np.interp(t_s, wt, wx)
        ay = np.interp(t_s, wt, wy)
        t_from = fp.from_s
        t_to = fp.to_s if fp.to_s is not None else script.duration_s
        window = (t_s >= t_from) & (t_s < t_to)
        noise = (
            rng.normal(0.0, fp.noise_m, size=(n, 10, 2)) if fp.noise_m > 0 else None
        )
        for k, pid in enumerate(fp.players):
            pos = np.column_stack([ax + offsets[k, 0], ay + offsets[k, 1]])
            if noise is not None:
                pos = pos + noise[:, k, :]
            if pid in move_disp:
                pos = pos + move_disp[pid]  # scripted moves overlay the slot track
            if pid in positions:
                positions[pid] = np.where(window[:, None], pos, positions[pid])
                visible[pid] = visible[pid] | window
            else:
                positions[pid] = pos
                visible[pid] = window.copy()
                rosters.setdefault(fp.team, []).append(pid)
                columns.append((pid, fp.team))
            slot = tpl.slots[k]
            roles[pid] = simplify_role(slot.role, slot.side).value
        formations_truth.setdefault(fp.team, []).append(
            (int(t_from * 1000), int(t_to * 1000), fp.template)
        )

    events = [
        Event(
            t_ms=round(e.t_s * 1000),
            type=EventType(e.type),
            team_id=e.team,
            player_id=e.player,
            x=e.loc[0],
            y=e.loc[1],
            end_x=e.end_loc[0] if e.end_loc else None,
            end_y=e.end_loc[1] if e.end_loc else None,
        )
        for e in sorted(script.events, key=lambda e: e.t_s)
    ]

    truth_possession = [
        TruthSpan(s.team, round(s.t0_s * 1000), round(s.t1_s * 1000), s.attack)
        for s in script.possession
    ]

    meta = MatchMeta(
        match_id=script.match_id,
        pitch=pitch,
        rosters={t: tuple(ps) for t, ps in rosters.items()},
        goalkeepers=frozenset(gks),
        attack_sign_p1=dict(script.attack_sign_p1),
    )
    truth = GroundTruth(truth_runs, truth_possession, roles, formations_truth)

    if n == 0:
        return SynthMatch(script, meta, [], events, truth)

    m = len(columns)
    xy = np.full((n, m, 2), np.nan)
    for j, (pid, _) in enumerate(columns):
        xy[visible[pid], j, :] = positions[pid][visible[pid]]

    if script.ball_waypoints:
        wp = sorted(script.ball_waypoints)
        wt = np.array([w[0] for w in wp])
        ball = np.column_stack(
            [np.interp(t_s, wt, np.array([w[1] for w in wp])),
             np.interp(t_s, wt, np.array([w[2] for w in wp]))]
        )
    else:
        ball = np.tile([pitch.length / 2.0, pitch.width / 2.0], (n, 1))

    in_play = np.ones(n, dtype=bool)
    for span in script.possession:
        if span.team is None:
            in_play[(t_s >= span.t0_s) & (t_s < span.t1_s)] = False

    seq = TrackingSequence(
        t_ms=np.arange(n, dtype=np.int64) * FRAME_INTERVAL_MS,
        period=np.ones(n, dtype=np.int16),
        ball=ball,
        in_play=in_play,
        xy=xy,
        player_ids=[c[0] for c in columns],
        player_teams=[c[1] for c in columns],
        attack_sign_p1=script.attack_sign_p1,
    )
    return SynthMatch(script, meta, [seq], events, truth)


# --- script (de)serialization ----------------------------------------------


def script_to_dict(s: Script) -> dict:
    return {
        "seed": s.seed,
        "duration_s": s.duration_s,
        "match_id": s.match_id,
        "pitch": {"length": s.pitch.length, "width": s.pitch.width},
        "attacking_direction_first_period": dict(s.attack_sign_p1),
        "players": [
            {
                "id": p.player_id,
                "team": p.team,
                "start": list(p.start),
                "goalkeeper": p.goalkeeper,
                "jitter_m": p.jitter_m,
                "enter_s": p.enter_s,
                "exit_s": p.exit_s,
                "moves": [
                    {
                        "t_start_s": m.t_start_s,
                        "heading_deg": m.heading_deg,
                        "cruise_kmh": m.cruise_kmh,
                        "distance_m": m.distance_m,
                        "accel": m.accel,
                        "decel": m.decel,
                    }
                    for m in p.moves
                ],
            }
            for p in s.players
        ],
        "formations": [
            {
                "team": f.team,
                "template": f.template,
                "players": list(f.players),
                "anchor_path": [list(a) for a in f.anchor_path],
                "spread": f.spread,
                "noise_m": f.noise_m,
                "from_s": f.from_s,
                "to_s": f.to_s,
            }
            for f in s.formations
        ],
        "ball_waypoints": [list(w) for w in s.ball_waypoints],
        "events": [
            {
                "t_s": e.t_s,
                "type": e.type,
                "team": e.team,
                "player": e.player,
                "loc": list(e.loc),
                "end_loc": list(e.end_loc) if e.end_loc else None,
            }
            for e in s.events
        ],
        "possession": [
            {"team": p.team, "t0_s": p.t0_s, "t1_s": p.t1_s, "attack": p.attack}
            for p in s.possession
        ],
    }


def script_from_dict(d: dict) -> Script:
    return Script(
        seed=int(d["seed"]),
        duration_s=float(d["duration_s"]),
        match_id=d.get("match_id", "synthetic"),
        pitch=PitchSpec(**d.get("pitch", {})),
        attack_sign_p1={
            k: int(v) for k, v in d.get("attacking_direction_first_period", {"h": 1, "a": -1}).items()
        },
        players=tuple(
            PlayerScript(
                player_id=p["id"],
                team=p["team"],
                start=tuple(p["start"]),
                goalkeeper=p.get("goalkeeper", False),
                jitter_m=p.get("jitter_m", 0.0),
                enter_s=p.get("enter_s", 0.0),
                exit_s=p.get("exit_s"),
                moves=tuple(Move(**m) for m in p.get("moves", [])),
            )
            for p in d.get("players", [])
        ),
        formations=tuple(
            FormationPlacement(
                team=f["team"],
                template=f["template"],
                players=tuple(f["players"]),
                anchor_path=tuple(tuple(a) for a in f["anchor_path"]),
                spread=f.get("spread", 1.0),
                noise_m=f.get("noise_m", 0.0),
                from_s=f.get("from_s", 0.0),
                to_s=f.get("to_s"),
            )
            for f in d.get("formations", [])
        ),
        ball_waypoints=tuple(tuple(w) for w in d.get("ball_waypoints", [])),
        events=tuple(
            EventSpec(
                t_s=e["t_s"],
                type=e["type"],
                team=e["team"],
                player=e["player"],
                loc=tuple(e["loc"]),
                end_loc=tuple(e["end_loc"]) if e.get("end_loc") else None,
            )
            for e in d.get("events", [])
        ),
        possession=tuple(
            PossessionSpan(p["team"], p["t0_s"], p["t1_s"], p.get("attack"))
            for p in d.get("possession", [])
        ),
    )


def load_script(path: str | Path) -> Script:
    return script_from_dict(json.loads(Path(path).read_text()))


def save_script(script: Script, path: str | Path) -> None:
    Path(path).write_text(json.dumps(script_to_dict(script), indent=1) + "\n")


# --- bundled fixture builders -----------------------------------------------


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture script (reference_trace, two_block_short,
    two_block_full, fatigue_decay)."""
    p = Path(__file__).parent / "fixtures" / f"{name}.json"
    if not p.exists():
        available = sorted(q.stem for q in p.parent.glob("*.json"))
        raise FileNotFoundError(f"unknown fixture {name!r}; available: {available}")
    return p


def approach_reception_drive_script(seed: int = 7) -> Script:
    """One attacker: a short approach effort, a reception, a ball drive, and a
    final burst toward the box — three valley-to-valley runs peaking near
    6, 21, and 21 km/h."""
    p = "h10"
    moves = (
        Move(t_start_s=3.0, heading_deg=0.0, cruise_kmh=6.2, distance_m=4.0),
        Move(t_start_s=8.0, heading_deg=0.0, cruise_kmh=21.4, distance_m=30.0),
        Move(t_start_s=17.0, heading_deg=15.0, cruise_kmh=21.4, distance_m=25.0),
    )
    drive_start = 8.0
    events = (
        EventSpec(0.0, "kickoff", "h", "h8", (52.5, 34.0)),
        EventSpec(6.5, "pass", "h", "h8", (40.0, 34.0), (24.0, 30.0)),
        EventSpec(drive_start, "reception", "h", p, (24.0, 30.0)),
        EventSpec(10.0, "carry", "h", p, (30.0, 30.0), (49.0, 30.0)),
        EventSpec(15.2, "dribble", "h", p, (49.0, 30.0)),
        EventSpec(23.5, "cross", "h", p, (73.0, 36.0), (95.0, 34.0)),
    )
    ball = (
        (0.0, 52.5, 34.0),
        (6.5, 40.0, 34.0),
        (8.0, 24.0, 30.0),
        (15.0, 49.0, 30.0),
        (23.5, 73.0, 36.0),
        (26.0, 95.0, 34.0),
    )
    return Script(
        seed=seed,
        duration_s=30.0,
        match_id="approach-drive-cross",
        players=(
            PlayerScript(p, "h", (20.0, 30.0), moves),
            PlayerScript("h8", "h", (40.0, 34.0)),
            PlayerScript("a1", "a", (70.0, 34.0)),
        ),
        ball_waypoints=ball,
        events=events,
        possession=(PossessionSpan("h", 0.0, 30.0, "organized"),),
    )


def two_block_match_script(
    seed: int = 11,
    duration_s: float = 6600.0,
    possession_cycle_s: float = 180.0,
    sprint_every_s: float = 60.0,
) -> Script:
    """Full-length two-team match: both teams hold formation shapes around
    oscillating anchors, the strikers add out-and-back sprints, and scripted
    events alternate possession with occasional out-of-play breaks."""
    h_out = tuple(f"h{i}" for i in range(1, 11))
    a_out = tuple(f"a{i}" for i in range(1, 11))

    def anchors(base_x: float, lo: float, hi: float, phase: float) -> tuple:
        path = []
        t = 0.0
        k = 0
        while t <= duration_s:
            x = lo if (k + phase) % 2 < 1 else hi
            path.append((t, x, 34.0))
            t += 300.0
            k += 1
        return tuple(path)

    players = [
        PlayerScript("hgk", "h", (4.0, 34.0), goalkeeper=True),
        PlayerScript("agk", "a", (101.0, 34.0), goalkeeper=True),
    ]
    # strikers sprint out and back so they stay pinned to their slots
    sprint_moves_h = []
    sprint_moves_a = []
    t = 30.0
    while t + 22.0 < duration_s:
        sprint_moves_h.append(Move(t, 0.0, 23.0, 24.0))
        sprint_moves_h.append(Move(t + 8.0, 180.0, 23.0, 24.0))
        sprint_moves_a.append(Move(t + 3.0, 180.0, 23.0, 24.0))
        sprint_moves_a.append(Move(t + 11.0, 0.0, 23.0, 24.0))
        t += sprint_every_s
    players.append(PlayerScript("h10", "h", (0.0, 0.0), tuple(sprint_moves_h)))
    players.append(PlayerScript("a10", "a", (0.0, 0.0), tuple(sprint_moves_a)))

    # possession alternates h/a with a 4 s out-of-play break each cycle
    spans: list[PossessionSpan] = []
    events: list[EventSpec] = [EventSpec(0.0, "kickoff", "h", "h5", (52.5, 34.0))]
    t = 0.0
    team_flip = 0
    while t < duration_s:
        team = "h" if team_flip % 2 == 0 else "a"
        t_end = min(t + possession_cycle_s, duration_s)
        live_end = max(t, t_end - 4.0)
        if live_end > t:
            spans.append(PossessionSpan(team, t, live_end))
            if t > 0:
                events.append(
                    EventSpec(t, "recovery", team, f"{team}5", (30.0 if team == "h" else 75.0, 34.0))
                )
            s = t + 10.0
            while s < live_end - 1.0:
                events.append(
                    EventSpec(s, "pass", team, f"{team}6", (50.0, 30.0), (55.0, 38.0))
                )
                if s + 1.5 < live_end - 1.0:
                    events.append(
                        EventSpec(s + 1.5, "reception", team, f"{team}7", (55.0, 38.0))
                    )
                if s + 3.0 < live_end - 1.0:
                    events.append(
                        EventSpec(s + 3.0, "carry", team, f"{team}7", (55.0, 38.0), (58.0, 40.0))
                    )
                s += 15.0
        if t_end > live_end:
            spans.append(PossessionSpan(None, live_end, t_end))
            events.append(EventSpec(live_end, "ball_out", team, f"{team}3", (30.0, 67.0)))
            events.append(
                EventSpec(
                    t_end,
                    "throw_in",
                    "a" if team == "h" else "h",
                    f"{'a' if team == 'h' else 'h'}2",
                    (30.0, 67.0),
                )
            )
        t = t_end
        team_flip += 1

    ball = tuple(
        (float(k * 20), 30.0 + 45.0 * ((k % 4) in (1, 2)), 30.0 + 8.0 * (k % 2))
        for k in range(int(duration_s / 20) + 1)
    )
    return Script(
        seed=seed,
        duration_s=duration_s,
        match_id="two-block-match",
        players=tuple(players),
        formations=(
            FormationPlacement("h", "4-3-3", h_out, anchors(35, 30.0, 44.0, 0), spread=0.62),
            FormationPlacement("a", "4-4-2", a_out, anchors(70, 61.0, 75.0, 1), spread=0.62),
        ),
        ball_waypoints=ball,
        events=tuple(sorted(events, key=lambda e: e.t_s)),
        possession=tuple(spans),
    )


def fatigue_decay_script(seed: int = 5, switch_minute: int = 65, minutes: int = 90) -> Script:
    """Defensive-load fixture: the home side defends the whole match; its
    sprinters make five identical HI efforts per minute before the switch
    minute and four after (a 20% cut), while steady walking keeps the total
    distance falling far less."""
    duration = minutes * 60.0
    players: list[PlayerScript] = [
        PlayerScript("hgk", "h", (4.0, 34.0), goalkeeper=True),
        PlayerScript("agk", "a", (101.0, 34.0), goalkeeper=True),
        PlayerScript("a1", "a", (70.0, 20.0)),
        PlayerScript("a2", "a", (70.0, 48.0)),
    ]
    for k in range(4):  # sprinters
        moves = []
        idx = 0
        for m in range(minutes):
            offsets = (2, 14, 26, 38, 50) if m < switch_minute else (2, 17, 32, 47)
            for off in offsets:
                heading = 0.0 if idx % 2 == 0 else 180.0
                moves.append(Move(m * 60.0 + off, heading, 23.0, 25.0))
                idx += 1
        players.append(PlayerScript(f"hr{k}", "h", (25.0, 12.0 + 8.0 * k), tuple(moves)))
    for k in range(6):  # walkers supply the steady base load
        moves = []
        for m in range(minutes):
            heading = 0.0 if m % 2 == 0 else 180.0
            moves.append(Move(m * 60.0 + 1.0, heading, 4.0, 50.0))
        players.append(PlayerScript(f"hw{k}", "h", (20.0, 8.0 + 9.0 * k), tuple(moves)))

    events = [EventSpec(0.0, "kickoff", "a", "a1", (52.5, 34.0))]
    s = 20.0
    while s < duration:
        events.append(EventSpec(s, "pass", "a", "a1", (70.0, 30.0), (68.0, 40.0)))
        s += 30.0
    return Script(
        seed=seed,
        duration_s=duration,
        match_id="fatigue-decay",
        players=tuple(players),
        ball_waypoints=((0.0, 70.0, 34.0), (duration, 70.0, 34.0)),
        events=tuple(events),
        possession=(PossessionSpan("a", 0.0, duration),),
    )

"""Match processing: raw bundle -> per-match artifact dictionaries.

Stage order: per-player kinematics, possession segmentation, tactical
annotation, role timelines, run contextualization, possession-value samples,
effective-time ledger. Each artifact is a plain JSON-ready structure; the
store handles persistence and hashing.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, PipelineConfig
from .core import FRAME_INTERVAL_MS, ON_BALL_TYPES, EventType, speed_categories
from .formations import (
    DEFAULT_TEMPLATES as DEFAULT_FORMATION_TEMPLATES,
    RoleTimeline,
    build_role_timeline,
    role_at,
)
from .io.formats import MatchBundle, MatchView
from .kinematics import RunEffort, compute_speed, segment_runs
from .possession import (
    AttackContext,
    DefenseView,
    PossessionSegment,
    annotate_segments,
    defense_frame_labels,
    segment_possessions,
)
from .tactical import InsufficientDefendersError, build_block, classify_run, fit_lines
from .valuation import Discarded, EpvProvider, SurrogateEpv, value_run

ARTIFACT_KINDS = (
    "runs",
    "segments",
    "roles",
    "contextual_runs",
    "valuation",
    "effective_time",
)

_CAT_KEYS = ("walking", "jogging", "running", "sprinting")


def _visible_spans(view: MatchView, col: int, config: PipelineConfig) -> list[tuple[int, int]]:
    """Maximal frame-index ranges (inclusive) that kinematics may treat as one
    series: visible, gaps within tolerance, single period."""
    vis = np.flatnonzero(~np.isnan(view.xy[:, col, 0]))
    if len(vis) == 0:
        return []
    t = view.match_ms[vis]
    p = view.period[vis]
    breaks = np.flatnonzero((np.diff(t) > config.max_gap_ms) | (np.diff(p) != 0))
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [len(vis) - 1]])
    return [(int(vis[a]), int(vis[b])) for a, b in zip(starts, ends)]


@dataclass
class _Kinematics:
    runs: list[RunEffort]
    dist: np.ndarray    # (n, m) per-frame displacement, NaN-free (0 outside spans)
    hi: np.ndarray      # (n, m) bool, smoothed speed at/above the HI threshold
    smooth: np.ndarray  # (n, m) smoothed km/h, NaN outside spans


def _player_kinematics(view: MatchView, config: PipelineConfig) -> _Kinematics:
    n, m = len(view), len(view.player_ids)
    dist = np.zeros((n, m))
    hi = np.zeros((n, m), dtype=bool)
    smooth = np.full((n, m), np.nan)
    runs: list[RunEffort] = []
    for j, pid in enumerate(view.player_ids):
        for i0, i1 in _visible_spans(view, j, config):
            if i1 - i0 < 1:
                continue
            t = view.match_ms[i0 : i1 + 1]
            xy = view.xy[i0 : i1 + 1, j, :]
            sig = compute_speed(t, xy, pid, config)
            if len(sig) == i1 - i0 + 1:  # the regular-grid case: aligned 1:1
                step = np.zeros(len(sig))
                step[1:] = np.linalg.norm(np.diff(sig.xy, axis=0), axis=1)
                dist[i0 : i1 + 1, j] = step
                smooth[i0 : i1 + 1, j] = sig.smooth_kmh
                hi[i0 : i1 + 1, j] = sig.smooth_kmh >= config.hi_threshold_kmh
            else:  # resampled: map back by timestamp
                idx = np.searchsorted(view.match_ms, sig.t_ms)
                sel = view.match_ms[np.clip(idx, 0, n - 1)] == sig.t_ms
                step = np.zeros(len(sig))
                step[1:] = np.linalg.norm(np.diff(sig.xy, axis=0), axis=1)
                dist[idx[sel], j] = step[sel]
                smooth[idx[sel], j] = sig.smooth_kmh[sel]
                hi[idx[sel], j] = sig.smooth_kmh[sel] >= config.hi_threshold_kmh
            runs.extend(segment_runs(sig, config))
    runs.sort(key=lambda r: (r.t_valley_end, r.player_id))
    return _Kinematics(runs, dist, hi, smooth)


def _period_bounds(view: MatchView) -> list[tuple[int, int]]:
    bounds = []
    for p in sorted(view.period_offset):
        sel = view.period == p
        if not np.any(sel):
            continue
        t0 = int(view.match_ms[sel].min())
        t1 = int(view.match_ms[sel].max()) + FRAME_INTERVAL_MS
        bounds.append((t0, t1))
    return bounds


def _segment_match(view: MatchView, config: PipelineConfig) -> list[PossessionSegment]:
    segments: list[PossessionSegment] = []
    for t0, t1 in _period_bounds(view):
        evs = [e for e in view.events if t0 <= e.t_ms < t1]
        segments.extend(segment_possessions(evs, t0, t1, config))
    return segments


class _PhaseLookup:
    """Phase of a team at a match time, backed by the raw possession tiling."""

    def __init__(self, segments: list[PossessionSegment]):
        self.segments = segments
        self.starts = [s.t_start for s in segments]

    def segment_at(self, t_ms: int) -> PossessionSegment | None:
        i = bisect.bisect_right(self.starts, t_ms) - 1
        if i < 0:
            return None
        seg = self.segments[i]
        return seg if seg.t_start <= t_ms < seg.t_end else None

    def phase_of(self, team: str, t_ms: int) -> str:
        seg = self.segment_at(t_ms)
        if seg is None or seg.team_id is None:
            return "out_of_play"
        return "in_possession" if seg.team_id == team else "out_of_possession"

    def phase_codes(self, team: str, match_ms: np.ndarray) -> np.ndarray:
        """0 = in possession, 1 = out of possession, 2 = out of play."""
        codes = np.full(len(match_ms), 2, dtype=np.int8)
        for seg in self.segments:
            if seg.team_id is None:
                continue
            i0, i1 = np.searchsorted(match_ms, (seg.t_start, seg.t_end))
            codes[i0:i1] = 0 if seg.team_id == team else 1
        return codes


def _onball_windows(view: MatchView, config: PipelineConfig) -> list[dict]:
    """Ball-control windows: a reception up to the player's last touch before
    another player intervenes."""
    onball = [e for e in view.events if e.type in ON_BALL_TYPES]
    windows: list[dict] = []
    open_w: dict | None = None
    for e in onball:
        if open_w is not None and e.player_id != open_w["player"]:
            windows.append(open_w)
            open_w = None
        if e.type == EventType.RECEPTION:
            if open_w is None:
                open_w = {
                    "player": e.player_id,
                    "team": e.team_id,
                    "t_start": e.t_ms,
                    "t_end": e.t_ms,
                }
            # a second reception by the same player extends the same control
        elif open_w is not None:
            open_w["t_end"] = e.t_ms
    if open_w is not None:
        windows.append(open_w)
    return windows


def process_bundle(
    bundle: MatchBundle,
    config: PipelineConfig = DEFAULT_CONFIG,
    provider: EpvProvider | None = None,
    templates=None,
) -> dict[str, object]:
    """Run the full per-match pipeline; returns {artifact kind: payload}.

    provider defaults to the documented surrogate possession-value model;
    templates to the built-in formation library.
    """
    view = MatchView(bundle)
    pitch = view.pitch
    teams = list(view.meta.teams)
    if len(teams) != 2:
        raise ValueError(f"expected exactly 2 teams, got {teams}")
    provider = provider or SurrogateEpv(pitch)

    kin = _player_kinematics(view, config)
    raw_segments = _segment_match(view, config)
    phases = _PhaseLookup(raw_segments)

    # attack/defense annotation
    centroid_x: dict[str, np.ndarray] = {}
    for team in teams:
        cols = view.team_columns(team, outfield_only=True)
        with np.errstate(all="ignore"):
            centroid_x[team] = np.nanmean(view.xy[:, cols, 0], axis=1)
    ctx = AttackContext(
        match_ms=view.match_ms,
        ball_x=view.ball[:, 0],
        centroid_x=centroid_x,
        length=pitch.length,
        sign_of=view.sign_at,
    )
    defense_labels: dict[str, np.ndarray] = {}
    for team in teams:
        cols = view.team_columns(team, outfield_only=True)
        signs = np.array(
            [view.attack_sign(team, int(p)) for p in view.period], dtype=np.float64
        )[:, None]
        x = view.xy[:, cols, 0]
        norm_x = np.where(signs > 0, x, pitch.length - x)
        dview = DefenseView(view.match_ms, norm_x, view.xy[:, cols, 1], pitch.length)
        defense_labels[team] = defense_frame_labels(dview, config)
    annotated = annotate_segments(raw_segments, view.events, ctx, defense_labels, teams, config)

    # role timelines per team (outfield only; goalkeepers keep their role)
    sub_times = sorted(
        e.t_ms for e in view.events if e.type == EventType.SUBSTITUTION
    )
    timelines: RoleTimeline = {}
    formation_phase = config.formation_phase
    for team in teams:
        cols = view.team_columns(team, outfield_only=True)
        ids = [view.player_ids[j] for j in cols]
        codes = phases.phase_codes(team, view.match_ms)
        want = 0 if formation_phase == "in_possession" else 1
        mask = (codes == want) & view.in_play
        # template matching happens in the attack-toward-+x frame
        signs = np.array(
            [view.attack_sign(team, int(p)) for p in view.period], dtype=np.float64
        )[:, None, None]
        team_xy = view.xy[:, cols, :]
        flipped = np.array([pitch.length, pitch.width])[None, None, :] - team_xy
        norm_xy = np.where(signs > 0, team_xy, flipped)
        timelines.update(
            build_role_timeline(
                norm_xy,
                ids,
                view.match_ms,
                view.period,
                mask,
                [t for t in sub_times],
                templates=templates if templates is not None else DEFAULT_FORMATION_TEMPLATES,
                window_ms=config.formation_window_s * 1000,
                stride_ms=config.formation_stride_s * 1000,
                min_window_phase_ms=config.min_window_phase_s * 1000,
                min_visibility_ms=config.min_role_visibility_s * 1000,
                min_visibility_share=config.min_visibility_share,
            )
        )

    team_of = {pid: t for pid, t in zip(view.player_ids, view.player_teams)}

    def geometry_for(runner_team: str):
        defender = next(t for t in teams if t != runner_team)
        cols = view.team_columns(defender, outfield_only=True)
        ids = [view.player_ids[j] for j in cols]

        def geometry_at(t_ms: int):
            i = view.index_near(t_ms, config.moment_tolerance_ms)
            sign = view.attack_sign(runner_team, int(view.period[i]))
            pts = view.xy[i, cols, :]
            ok = ~np.isnan(pts[:, 0])
            if int(ok.sum()) < 3:
                raise InsufficientDefendersError(int(ok.sum()))
            xs, ys = pts[ok, 0], pts[ok, 1]
            if sign < 0:
                xs, ys = pitch.length - xs, pitch.width - ys
            vis_ids = [pid for pid, o in zip(ids, ok) if o]
            lines = fit_lines(dict(zip(vis_ids, xs.tolist())), config.back_line_mode)
            block = build_block(list(zip(xs.tolist(), ys.tolist())))
            return lines, block

        return geometry_at

    def normalizer_for(team: str, t_ms: int):
        i = view.index_near(t_ms, tolerance_ms=None)
        sign = view.attack_sign(team, int(view.period[i]))
        if sign > 0:
            return lambda p: p
        return lambda p: (pitch.length - p[0], pitch.width - p[1])

    onball_windows = _onball_windows(view, config)
    by_player_windows: dict[str, list[tuple[int, int]]] = {}
    for w in onball_windows:
        by_player_windows.setdefault(w["player"], []).append((w["t_start"], w["t_end"]))

    geometry_cache = {team: geometry_for(team) for team in teams}
    contextual: list[dict] = []
    for run in kin.runs:
        team = team_of[run.player_id]
        phase = phases.phase_of(team, run.t_peak_start)
        cls = classify_run(
            run, geometry_cache[team], normalizer_for(team, run.t_valley_end)
        )
        iv = role_at(timelines, run.player_id, run.t_peak_start)
        role = iv.role.value if iv is not None and iv.role is not None else None
        onball = any(
            w0 <= run.t_next_valley_start and run.t_valley_end <= w1
            for w0, w1 in by_player_windows.get(run.player_id, ())
        )
        carry3s = any(
            w0 <= run.t_next_valley_start and run.t_valley_end <= w1 and (w1 - w0) >= 3000
            for w0, w1 in by_player_windows.get(run.player_id, ())
        )
        contextual.append(
            {
                "player": run.player_id,
                "team": team,
                "t_valley_end": run.t_valley_end,
                "t_peak_start": run.t_peak_start,
                "t_peak_end": run.t_peak_end,
                "t_next_valley_start": run.t_next_valley_start,
                "is_hi": run.is_hi,
                "peak_kmh": run.peak_speed,
                "distance_total_m": run.distance_total,
                "distance_hi_m": run.distance_hi,
                "phase": phase,
                "movement_type": cls.movement.value if cls.movement else None,
                "origin_zone": cls.origin_zone.value if cls.origin_zone else None,
                "destination_zone": cls.destination_zone.value if cls.destination_zone else None,
                "unclassified_reason": cls.reason,
                "role": role,
                "onball": onball,
                "carry3s": carry3s,
            }
        )

    # possession-value samples for HI runs
    samples: list[dict] = []
    discarded: list[dict] = []
    for run in kin.runs:
        if not run.is_hi:
            continue
        team = team_of[run.player_id]
        iv = role_at(timelines, run.player_id, run.t_peak_start)
        role = iv.role if iv is not None else None
        result = value_run(
            run,
            team,
            lambda t: view.frame_near(t, config.moment_tolerance_ms),
            raw_segments,
            provider,
            pitch,
            role,
            config,
        )
        if isinstance(result, Discarded):
            discarded.append(
                {"player": result.player_id, "t_start": result.t_start, "reason": result.reason}
            )
        else:
            samples.append(
                {
                    "player": result.player_id,
                    "team": result.team_id,
                    "role": result.role.value if result.role else None,
                    "t_start": result.t_start,
                    "t_end": result.t_end,
                    "epv_start": result.epv_start,
                    "epv_end": result.epv_end,
                    "epv_added": result.epv_added,
                    "angle": result.angle,
                    "distance": result.distance,
                }
            )

    # on-ball action values and reception speeds
    col_of = {pid: view.column(pid) for pid in view.player_ids}
    onball_records: list[dict] = []
    period_starts = {p: t0 for (t0, _), p in zip(_period_bounds(view), sorted(view.period_offset))}
    for w in onball_windows:
        pid = w["player"]
        j = col_of.get(pid)
        if j is None:
            continue
        iv = role_at(timelines, pid, w["t_start"])
        role = iv.role.value if iv is not None and iv.role is not None else None

        def speed_at(t: int) -> float | None:
            try:
                i = view.index_near(t, config.moment_tolerance_ms)
            except LookupError:
                return None
            v = kin.smooth[i, j]
            return None if math.isnan(v) else float(v)

        p_start = period_starts.get(
            int(view.period[view.index_near(w["t_start"], tolerance_ms=None)]), 0
        )
        v_now = speed_at(w["t_start"])
        v_pre = None if w["t_start"] - 2000 < p_start else speed_at(w["t_start"] - 2000)
        epv_added = None
        try:
            f0 = view.frame_near(w["t_start"], config.moment_tolerance_ms)
            f1 = view.frame_near(w["t_end"], config.moment_tolerance_ms)
            epv_added = provider.evaluate(f1, w["team"]) - provider.evaluate(f0, w["team"])
        except (LookupError, ValueError, KeyError):
            pass
        bounds = config.category_bounds_kmh
        onball_records.append(
            {
                "player": pid,
                "team": w["team"],
                "role": role,
                "t_start": w["t_start"],
                "t_end": w["t_end"],
                "category_at_reception": (
                    _CAT_KEYS[int(speed_categories(v_now, bounds))] if v_now is not None else None
                ),
                "category_2s_before": (
                    _CAT_KEYS[int(speed_categories(v_pre, bounds))] if v_pre is not None else None
                ),
                "epv_added": epv_added,
            }
        )

    effective_time = _effective_time(view, kin, phases, annotated, timelines, config)

    return {
        "runs": [
            {
                "player": r.player_id,
                "team": team_of[r.player_id],
                "t_valley_end": r.t_valley_end,
                "t_peak_start": r.t_peak_start,
                "t_peak_end": r.t_peak_end,
                "t_next_valley_start": r.t_next_valley_start,
                "origin": list(r.origin),
                "destination": list(r.destination),
                "peak_kmh": r.peak_speed,
                "distance_total_m": r.distance_total,
                "distance_hi_m": r.distance_hi,
                "is_hi": r.is_hi,
            }
            for r in kin.runs
        ],
        "segments": {
            "possessions": [_segment_dict(s) for s in raw_segments],
            "annotated": [_segment_dict(s) for s in annotated],
        },
        "roles": {
            pid: [
                [
                    iv.t_start,
                    iv.t_end,
                    iv.role.value if iv.role else None,
                    iv.formation,
                    iv.side,
                ]
                for iv in ivs
            ]
            for pid, ivs in sorted(timelines.items())
        },
        "contextual_runs": contextual,
        "valuation": {
            "samples": samples,
            "discarded": discarded,
            "onball_actions": onball_records,
        },
        "effective_time": effective_time,
    }


def _segment_dict(s: PossessionSegment) -> dict:
    return {
        "team_id": s.team_id,
        "t_start": s.t_start,
        "t_end": s.t_end,
        "end_reason": s.end_reason.value,
        "attack_type": s.attack_type.value if s.attack_type else None,
        "defense_type": s.defense_type.value if s.defense_type else None,
        "low_confidence": s.low_confidence,
    }


def _effective_time(
    view: MatchView,
    kin: _Kinematics,
    phases: _PhaseLookup,
    annotated: list[PossessionSegment],
    timelines: RoleTimeline,
    config: PipelineConfig,
) -> dict:
    teams = list(view.meta.teams)
    duration = view.t_end - view.t_start
    codes = {t: phases.phase_codes(t, view.match_ms) for t in teams}
    team_cols = {t: view.team_columns(t, outfield_only=False) for t in teams}

    out: dict = {"duration_ms": duration, "teams": {}, "players": {}, "per_minute": []}
    frame_ms = FRAME_INTERVAL_MS

    for team in teams:
        in_ms = sum(s.duration_ms for s in phases.segments if s.team_id == team)
        out_ms = sum(
            s.duration_ms for s in phases.segments if s.team_id not in (None, team)
        )
        oop_ms = duration - in_ms - out_ms
        c = codes[team]
        cols = team_cols[team]
        dist_team = kin.dist[:, cols].sum(axis=1)
        hi_team = (kin.dist[:, cols] * kin.hi[:, cols]).sum(axis=1)
        out["teams"][team] = {
            "in_possession_ms": in_ms,
            "out_of_possession_ms": out_ms,
            "out_of_play_ms": oop_ms,
            "distance_in_m": float(dist_team[c == 0].sum()),
            "distance_out_m": float(dist_team[c == 1].sum()),
            "hi_distance_in_m": float(hi_team[c == 0].sum()),
            "hi_distance_out_m": float(hi_team[c == 1].sum()),
        }

        # per-minute defensive (and offensive) effective time + distances
        minutes = int(np.ceil(duration / 60000.0))
        seg_list = [
            (s.t_start, s.t_end, s.team_id) for s in phases.segments if s.team_id is not None
        ]
        for minute in range(minutes):
            m0 = view.t_start + minute * 60000
            m1 = min(m0 + 60000, view.t_end)
            out_pos = sum(
                max(0, min(t1, m1) - max(t0, m0))
                for t0, t1, tid in seg_list
                if tid not in (None, team)
            )
            i0, i1 = np.searchsorted(view.match_ms, (m0, m1))
            sel_out = c[i0:i1] == 1
            out["per_minute"].append(
                {
                    "team": team,
                    "minute": minute,
                    "out_possession_ms": int(out_pos),
                    "distance_out_m": float(dist_team[i0:i1][sel_out].sum()),
                    "hi_distance_out_m": float(hi_team[i0:i1][sel_out].sum()),
                }
            )

    team_of = {pid: t for pid, t in zip(view.player_ids, view.player_teams)}
    for pid, intervals in sorted(timelines.items()):
        team = team_of[pid]
        c = codes[team]
        j = view.column(pid)
        pdist = kin.dist[:, j]
        phidist = kin.dist[:, j] * kin.hi[:, j]
        for iv in intervals:
            if iv.role is None:
                continue
            rec = (
                out["players"]
                .setdefault(pid, {})
                .setdefault(
                    iv.role.value,
                    {
                        "in_possession_ms": 0,
                        "out_of_possession_ms": 0,
                        "out_of_play_ms": 0,
                        "distance_in_m": 0.0,
                        "distance_out_m": 0.0,
                        "hi_distance_in_m": 0.0,
                        "hi_distance_out_m": 0.0,
                    },
                )
            )
            for seg in phases.segments:
                ov0, ov1 = max(seg.t_start, iv.t_start), min(seg.t_end, iv.t_end)
                if ov1 <= ov0:
                    continue
                if seg.team_id is None:
                    rec["out_of_play_ms"] += ov1 - ov0
                elif seg.team_id == team:
                    rec["in_possession_ms"] += ov1 - ov0
                else:
                    rec["out_of_possession_ms"] += ov1 - ov0
            i0, i1 = np.searchsorted(view.match_ms, (iv.t_start, iv.t_end))
            cc = c[i0:i1]
            rec["distance_in_m"] += float(pdist[i0:i1][cc == 0].sum())
            rec["distance_out_m"] += float(pdist[i0:i1][cc == 1].sum())
            rec["hi_distance_in_m"] += float(phidist[i0:i1][cc == 0].sum())
            rec["hi_distance_out_m"] += float(phidist[i0:i1][cc == 1].sum())
    return out

"""Formation templates, optimal slot assignment, and per-second role timelines.

Templates are 10 outfield slots on a canonical attack-toward-+x canvas; both
templates and observed mean positions are centered (mean at the origin) and
scale-normalized (RMS radius 1) before matching, so only shape matters.
"""
from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .assignment import solve_assignment
from .core import Role


class SlotRole(Enum):
    CENTER_BACK = "CB"
    FULL_BACK = "FB"
    WING_BACK = "WB"
    DEFENSIVE_MID = "DM"
    CENTRAL_MID = "CM"
    ATTACKING_MID = "AM"
    WIDE_MID = "WM"
    WIDE_FORWARD = "W"
    CENTER_FORWARD = "CF"


_SIMPLIFIED = {
    SlotRole.CENTER_BACK: Role.CENTRAL_DEFENDER,
    SlotRole.FULL_BACK: Role.FULL_BACK,
    SlotRole.WING_BACK: Role.FULL_BACK,
    SlotRole.DEFENSIVE_MID: Role.DEFENSIVE_MIDFIELDER,
    SlotRole.CENTRAL_MID: Role.MIDFIELDER,
    SlotRole.ATTACKING_MID: Role.MIDFIELDER,
    SlotRole.WIDE_MID: Role.WINGER,
    SlotRole.WIDE_FORWARD: Role.WINGER,
    SlotRole.CENTER_FORWARD: Role.STRIKER,
}


def simplify_role(slot_role: SlotRole, side: str = "C") -> Role:
    """Collapse slot roles into the seven profile roles; the side is dropped
    (left/right variants merge) and wing-backs fold into full-backs."""
    return _SIMPLIFIED[slot_role]


@dataclass(frozen=True)
class TemplateSlot:
    label: str
    role: SlotRole
    side: str  # L | C | R
    x: float
    y: float


@dataclass(frozen=True)
class FormationTemplate:
    name: str
    slots: tuple[TemplateSlot, ...]

    def __post_init__(self) -> None:
        if len(self.slots) != 10:
            raise ValueError(f"{self.name}: need exactly 10 outfield slots")

    def points(self) -> np.ndarray:
        return np.array([(s.x, s.y) for s in self.slots], dtype=np.float64)

    def normalized_points(self) -> np.ndarray:
        return normalize_shape(self.points())


def normalize_shape(points: np.ndarray) -> np.ndarray:
    """Center to the mean and scale to RMS radius 1."""
    pts = np.asarray(points, dtype=np.float64)
    centered = pts - pts.mean(axis=0)
    rms = np.sqrt(np.mean(np.sum(centered**2, axis=1)))
    if rms == 0.0:
        raise ValueError("degenerate shape: all points coincide")
    return centered / rms


def _slots(spec: Sequence[tuple[str, SlotRole, str, float, float]]) -> tuple[TemplateSlot, ...]:
    return tuple(TemplateSlot(*s) for s in spec)


R = SlotRole

DEFAULT_TEMPLATES: tuple[FormationTemplate, ...] = (
    FormationTemplate("4-4-2", _slots([
        ("LB", R.FULL_BACK, "L", 22, 56), ("LCB", R.CENTER_BACK, "C", 19, 42),
        ("RCB", R.CENTER_BACK, "C", 19, 26), ("RB", R.FULL_BACK, "R", 22, 12),
        ("LM", R.WIDE_MID, "L", 45, 58), ("LCM", R.CENTRAL_MID, "C", 42, 40),
        ("RCM", R.CENTRAL_MID, "C", 42, 28), ("RM", R.WIDE_MID, "R", 45, 10),
        ("LST", R.CENTER_FORWARD, "C", 63, 40), ("RST", R.CENTER_FORWARD, "C", 63, 28),
    ])),
    FormationTemplate("4-3-3", _slots([
        ("LB", R.FULL_BACK, "L", 25, 57), ("LCB", R.CENTER_BACK, "C", 18, 41),
        ("RCB", R.CENTER_BACK, "C", 18, 27), ("RB", R.FULL_BACK, "R", 25, 11),
        ("DM", R.DEFENSIVE_MID, "C", 34, 34), ("LCM", R.CENTRAL_MID, "C", 45, 44),
        ("RCM", R.CENTRAL_MID, "C", 45, 24), ("LW", R.WIDE_FORWARD, "L", 62, 58),
        ("RW", R.WIDE_FORWARD, "R", 62, 10), ("ST", R.CENTER_FORWARD, "C", 67, 34),
    ])),
    FormationTemplate("4-2-3-1", _slots([
        ("LB", R.FULL_BACK, "L", 24, 56), ("LCB", R.CENTER_BACK, "C", 18, 41),
        ("RCB", R.CENTER_BACK, "C", 18, 27), ("RB", R.FULL_BACK, "R", 24, 12),
        ("LDM", R.DEFENSIVE_MID, "C", 34, 41), ("RDM", R.DEFENSIVE_MID, "C", 34, 27),
        ("LW", R.WIDE_FORWARD, "L", 55, 57), ("AM", R.ATTACKING_MID, "C", 51, 34),
        ("RW", R.WIDE_FORWARD, "R", 55, 11), ("ST", R.CENTER_FORWARD, "C", 66, 34),
    ])),
    FormationTemplate("4-1-4-1", _slots([
        ("LB", R.FULL_BACK, "L", 24, 56), ("LCB", R.CENTER_BACK, "C", 18, 41),
        ("RCB", R.CENTER_BACK, "C", 18, 27), ("RB", R.FULL_BACK, "R", 24, 12),
        ("DM", R.DEFENSIVE_MID, "C", 31, 34), ("LM", R.WIDE_MID, "L", 48, 57),
        ("LCM", R.CENTRAL_MID, "C", 45, 41), ("RCM", R.CENTRAL_MID, "C", 45, 27),
        ("RM", R.WIDE_MID, "R", 48, 11), ("ST", R.CENTER_FORWARD, "C", 65, 34),
    ])),
    FormationTemplate("3-4-2-1", _slots([
        ("LCB", R.CENTER_BACK, "C", 20, 46), ("CB", R.CENTER_BACK, "C", 17, 34),
        ("RCB", R.CENTER_BACK, "C", 20, 22), ("LWB", R.WING_BACK, "L", 40, 60),
        ("LCM", R.CENTRAL_MID, "C", 36, 41), ("RCM", R.CENTRAL_MID, "C", 36, 27),
        ("RWB", R.WING_BACK, "R", 40, 8), ("LAM", R.ATTACKING_MID, "C", 56, 44),
        ("RAM", R.ATTACKING_MID, "C", 56, 24), ("ST", R.CENTER_FORWARD, "C", 65, 34),
    ])),
    FormationTemplate("3-5-2", _slots([
        ("LCB", R.CENTER_BACK, "C", 20, 46), ("CB", R.CENTER_BACK, "C", 17, 34),
        ("RCB", R.CENTER_BACK, "C", 20, 22), ("LWB", R.WING_BACK, "L", 43, 61),
        ("DM", R.DEFENSIVE_MID, "C", 33, 34), ("LCM", R.CENTRAL_MID, "C", 44, 42),
        ("RCM", R.CENTRAL_MID, "C", 44, 26), ("RWB", R.WING_BACK, "R", 43, 7),
        ("LST", R.CENTER_FORWARD, "C", 64, 40), ("RST", R.CENTER_FORWARD, "C", 64, 28),
    ])),
    FormationTemplate("3-4-3", _slots([
        ("LCB", R.CENTER_BACK, "C", 20, 46), ("CB", R.CENTER_BACK, "C", 17, 34),
        ("RCB", R.CENTER_BACK, "C", 20, 22), ("LM", R.WIDE_MID, "L", 42, 59),
        ("LCM", R.CENTRAL_MID, "C", 38, 41), ("RCM", R.CENTRAL_MID, "C", 38, 27),
        ("RM", R.WIDE_MID, "R", 42, 9), ("LW", R.WIDE_FORWARD, "L", 61, 53),
        ("ST", R.CENTER_FORWARD, "C", 66, 34), ("RW", R.WIDE_FORWARD, "R", 61, 15),
    ])),
    FormationTemplate("5-3-2", _slots([
        ("LWB", R.WING_BACK, "L", 28, 60), ("LCB", R.CENTER_BACK, "C", 17, 44),
        ("CB", R.CENTER_BACK, "C", 15, 34), ("RCB", R.CENTER_BACK, "C", 17, 24),
        ("RWB", R.WING_BACK, "R", 28, 8), ("LCM", R.CENTRAL_MID, "C", 39, 45),
        ("CM", R.CENTRAL_MID, "C", 36, 34), ("RCM", R.CENTRAL_MID, "C", 39, 23),
        ("LST", R.CENTER_FORWARD, "C", 61, 40), ("RST", R.CENTER_FORWARD, "C", 61, 28),
    ])),
    FormationTemplate("5-4-1", _slots([
        ("LWB", R.WING_BACK, "L", 26, 60), ("LCB", R.CENTER_BACK, "C", 16, 44),
        ("CB", R.CENTER_BACK, "C", 14, 34), ("RCB", R.CENTER_BACK, "C", 16, 24),
        ("RWB", R.WING_BACK, "R", 26, 8), ("LM", R.WIDE_MID, "L", 45, 56),
        ("LCM", R.CENTRAL_MID, "C", 41, 41), ("RCM", R.CENTRAL_MID, "C", 41, 27),
        ("RM", R.WIDE_MID, "R", 45, 12), ("ST", R.CENTER_FORWARD, "C", 63, 34),
    ])),
)


def load_templates(path: str | Path) -> tuple[FormationTemplate, ...]:
    """Read a template library from JSON:
    [{"name": "...", "slots": [{"label","role","side","x","y"}, ...]}, ...]"""
    raw = json.loads(Path(path).read_text())
    out = []
    for t in raw:
        slots = tuple(
            TemplateSlot(s["label"], SlotRole(s["role"]), s["side"], float(s["x"]), float(s["y"]))
            for s in t["slots"]
        )
        out.append(FormationTemplate(t["name"], slots))
    return tuple(out)


class InsufficientVisibilityError(ValueError):
    pass


def mean_relative_positions(
    xy: np.ndarray,
    player_ids: Sequence[str],
    frame_mask: np.ndarray,
    min_visibility_share: float = 0.5,
) -> dict[str, tuple[float, float]]:
    """Centroid-relative mean position per player over the masked frames,
    centered and RMS-normalized across the ten qualifying players.

    xy is (n_frames, n_players, 2) with NaN for occlusions; exactly the ten
    most-visible qualifying players survive.
    """
    sel = np.flatnonzero(frame_mask)
    if len(sel) == 0:
        raise InsufficientVisibilityError("no frames in window")
    pts = xy[sel]  # (f, k, 2)
    visible = ~np.isnan(pts[:, :, 0])
    n_vis_frames = visible.sum(axis=0)
    with np.errstate(invalid="ignore"):
        centroid = np.nanmean(pts, axis=1, keepdims=True)  # (f, 1, 2)
    rel = pts - centroid
    sums = np.nansum(np.where(visible[:, :, None], rel, 0.0), axis=0)
    share = n_vis_frames / len(sel)
    qualified = np.flatnonzero(share >= min_visibility_share)
    if len(qualified) < 10:
        raise InsufficientVisibilityError(
            f"only {len(qualified)} players with >= {min_visibility_share:.0%} visibility"
        )
    order = sorted(qualified, key=lambda j: (-n_vis_frames[j], player_ids[j]))[:10]
    means = np.array([sums[j] / n_vis_frames[j] for j in order])
    normed = normalize_shape(means)
    return {player_ids[j]: (float(p[0]), float(p[1])) for j, p in zip(order, normed)}


@dataclass(frozen=True)
class FormationFit:
    template: FormationTemplate
    assignment: Mapping[str, int]  # player_id -> slot index
    cost: float

    def role_of(self, player_id: str) -> Role:
        slot = self.template.slots[self.assignment[player_id]]
        return simplify_role(slot.role, slot.side)

    def side_of(self, player_id: str) -> str:
        return self.template.slots[self.assignment[player_id]].side


def assign_formation(
    relpos: Mapping[str, tuple[float, float]],
    templates: Sequence[FormationTemplate] = DEFAULT_TEMPLATES,
) -> FormationFit:
    """Best min-total-squared-distance matching over the template library;
    cost ties keep the earlier template in the list."""
    ids = sorted(relpos.keys())
    if len(ids) != len(set(ids)):
        raise ValueError("duplicate player ids")
    pts = np.array([relpos[i] for i in ids], dtype=np.float64)
    best: FormationFit | None = None
    for tpl in templates:
        tpl_pts = tpl.normalized_points()
        if len(tpl_pts) != len(pts):
            raise ValueError(
                f"{tpl.name}: {len(tpl_pts)} slots vs {len(pts)} players"
            )
        diff = pts[:, None, :] - tpl_pts[None, :, :]
        cost = np.sum(diff * diff, axis=2)
        row_to_col, total = solve_assignment(cost)
        if best is None or total < best.cost:
            best = FormationFit(tpl, dict(zip(ids, row_to_col.tolist())), total)
    assert best is not None
    return best


@dataclass(frozen=True)
class RoleInterval:
    t_start: int
    t_end: int
    role: Role | None  # None = unknown
    formation: str | None
    side: str | None


RoleTimeline = dict[str, list[RoleInterval]]


def role_at(timeline: RoleTimeline, player_id: str, t_ms: int) -> RoleInterval | None:
    for iv in timeline.get(player_id, ()):
        if iv.t_start <= t_ms < iv.t_end or (t_ms == iv.t_end and iv is timeline[player_id][-1]):
            return iv
    return None


def build_role_timeline(
    team_xy: np.ndarray,
    player_ids: Sequence[str],
    match_ms: np.ndarray,
    period: np.ndarray,
    phase_mask: np.ndarray,
    sub_times: Sequence[int] = (),
    templates: Sequence[FormationTemplate] = DEFAULT_TEMPLATES,
    window_ms: int = 600_000,
    stride_ms: int = 60_000,
    min_window_phase_ms: int = 60_000,
    min_visibility_ms: int = 60_000,
    min_visibility_share: float = 0.5,
) -> RoleTimeline:
    """Second-resolution roles from sliding-window formation fits.

    Windows never span a period boundary or a substitution (both restart the
    epoch); each second takes the fit whose window center is nearest. Players
    visible for less than `min_visibility_ms` get an unknown role.
    """
    n = len(match_ms)
    if n == 0:
        return {}
    frame_ms = int(match_ms[1] - match_ms[0]) if n > 1 else 100

    # epoch boundaries: match start/end, period changes, substitutions
    bounds = {int(match_ms[0]), int(match_ms[-1]) + frame_ms}
    for i in np.flatnonzero(np.diff(period) != 0):
        bounds.add(int(match_ms[i + 1]))
    for t in sub_times:
        bounds.add(int(t))
    edges = sorted(bounds)
    epochs = [(a, b) for a, b in zip(edges, edges[1:]) if b > a]

    fits: list[tuple[int, int, FormationFit]] = []  # (center_ms, epoch_idx, fit)
    for ei, (e0, e1) in enumerate(epochs):
        if e1 - e0 >= window_ms:
            starts = list(range(e0, e1 - window_ms + 1, stride_ms))
        else:
            starts = [e0]
        for t0 in starts:
            t1 = min(t0 + window_ms, e1)
            mask = (match_ms >= t0) & (match_ms < t1) & phase_mask
            if int(mask.sum()) * frame_ms < min_window_phase_ms:
                continue
            try:
                rel = mean_relative_positions(
                    team_xy, player_ids, mask, min_visibility_share
                )
                fit = assign_formation(rel, templates)
            except (InsufficientVisibilityError, ValueError):
                continue
            fits.append(((t0 + t1) // 2, ei, fit))

    # per-epoch center lists for nearest-window lookup, plus per-fit caches of
    # every player's (role, formation, side) tuple
    epoch_starts = [a for a, _ in epochs]
    by_epoch: dict[int, tuple[list[int], list[FormationFit]]] = {}
    for center, ei, fit in fits:
        centers, flist = by_epoch.setdefault(ei, ([], []))
        centers.append(center)
        flist.append(fit)
    fit_states: dict[int, dict[str, tuple]] = {}

    def states_of(fit: FormationFit) -> dict[str, tuple]:
        key = id(fit)
        cached = fit_states.get(key)
        if cached is None:
            cached = {
                pid: (fit.role_of(pid), fit.template.name, fit.side_of(pid))
                for pid in fit.assignment
            }
            fit_states[key] = cached
        return cached

    unknown = (None, None, None)

    def fit_near(s: int) -> FormationFit | None:
        ei = bisect.bisect_right(epoch_starts, s) - 1
        if ei < 0 or not (epochs[ei][0] <= s < epochs[ei][1]):
            return None
        entry = by_epoch.get(ei)
        if entry is None:
            return None
        centers, flist = entry
        i = bisect.bisect_left(centers, s)
        if i == 0:
            return flist[0]
        if i == len(centers):
            return flist[-1]
        return flist[i - 1] if s - centers[i - 1] <= centers[i] - s else flist[i]

    visible = ~np.isnan(team_xy[:, :, 0])
    timeline: RoleTimeline = {}
    for j, pid in enumerate(player_ids):
        vis_idx = np.flatnonzero(visible[:, j])
        if len(vis_idx) == 0:
            continue
        t_on = int(match_ms[vis_idx[0]])
        t_off = int(match_ms[vis_idx[-1]]) + frame_ms
        known = int(len(vis_idx)) * frame_ms >= min_visibility_ms

        intervals: list[RoleInterval] = []
        s = t_on
        while s < t_off:
            if known:
                fit = fit_near(s)
                state = states_of(fit).get(pid, unknown) if fit is not None else unknown
            else:
                state = unknown
            e = min(s + 1000, t_off)
            last = intervals[-1] if intervals else None
            if last is not None and (last.role, last.formation, last.side) == state:
                intervals[-1] = RoleInterval(last.t_start, e, *state)
            else:
                intervals.append(RoleInterval(s, e, *state))
            s = e
        timeline[pid] = intervals
    return timeline

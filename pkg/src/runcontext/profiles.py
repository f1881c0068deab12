"""Effective-time normalization and player/team season profiles.

Everything here is an associative fold over per-match artifacts: the pipeline
writes per-match records, this module pools them, normalizes by effective
(ball-in-play) time, and derives the player profile, team style, lineup,
PCA, and minute-curve tables.

Rates use 30 effective minutes of the relevant possession phase; phase-less
rates use 60 effective minutes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, PipelineConfig
from .core import Role, SpeedCategory
from .decomposition import StandardizedPCA
from .tactical import MovementType
from .valuation import RunInfluenceModel, RunValueSample, fit_influence

MOVEMENT_KEYS = tuple(mt.value for mt in MovementType)
CATEGORY_KEYS = tuple(c.name.lower() for c in SpeedCategory)

PER30_MS = 30 * 60 * 1000
PER60_MS = 60 * 60 * 1000


def per30(value: float, phase_ms: int) -> float | None:
    """Rate per 30 effective minutes of one possession phase."""
    if phase_ms <= 0:
        return None
    return value * PER30_MS / phase_ms


def per60(value: float, effective_ms: int) -> float | None:
    """Rate per 60 effective minutes, phase-agnostic."""
    if effective_ms <= 0:
        return None
    return value * PER60_MS / effective_ms


def midpoint_percentiles(values: Mapping[str, float]) -> dict[str, float]:
    """Percentile of each key among all values, average-rank convention for
    ties; results live in [0, 100] and are monotone in the value."""
    items = sorted(values.items(), key=lambda kv: kv[1])
    n = len(items)
    out: dict[str, float] = {}
    i = 0
    while i < n:
        j = i
        while j + 1 < n and items[j + 1][1] == items[i][1]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0  # 1-based average rank
        for k in range(i, j + 1):
            out[items[k][0]] = 100.0 * (mean_rank - 0.5) / n
        i = j + 1
    return out


@dataclass
class _CellAgg:
    """Accumulator for one (player, role) cell across matches."""

    in_ms: int = 0
    out_ms: int = 0
    oop_ms: int = 0
    dist_in_m: float = 0.0
    dist_out_m: float = 0.0
    hi_dist_in_m: float = 0.0
    hi_dist_out_m: float = 0.0
    hi_runs_in: int = 0
    hi_runs_out: int = 0
    movement: dict[str, int] = field(default_factory=lambda: {k: 0 for k in MOVEMENT_KEYS})
    hi_runs_in_onball: int = 0
    hi_runs_in_carry3s: int = 0
    receptions: dict[str, int] = field(default_factory=lambda: {k: 0 for k in CATEGORY_KEYS})
    onball_counts: dict[str, int] = field(default_factory=lambda: {k: 0 for k in CATEGORY_KEYS})
    epv_added: dict[str, float] = field(default_factory=lambda: {k: 0.0 for k in CATEGORY_KEYS})

    @property
    def total_ms(self) -> int:
        return self.in_ms + self.out_ms + self.oop_ms


@dataclass
class _TeamAgg:
    matches: int = 0
    in_ms: int = 0
    out_ms: int = 0
    oop_ms: int = 0
    direct_play_ms: int = 0
    high_press_ms: int = 0
    dist_in_m: float = 0.0
    dist_out_m: float = 0.0
    hi_dist_in_m: float = 0.0
    hi_dist_out_m: float = 0.0


@dataclass(frozen=True)
class PlayerProfile:
    player: str
    role: str
    minutes_total: float
    minutes_in_possession: float
    minutes_out_of_possession: float
    minutes_out_of_play: float
    qualified: bool
    hi_runs_per30_in: float | None
    hi_distance_per30_in: float | None
    hi_runs_per30_out: float | None
    hi_distance_per30_out: float | None
    movement_per30: dict[str, float | None]
    movement_percentile: dict[str, float | None]
    onball_hi_share: float | None
    carry3s_share: float | None
    reception_share: dict[str, float | None]
    onball_actions_per30: dict[str, float | None]
    epv_added_per30: dict[str, float | None]
    influence_coef: float | None
    influence_se: float | None

    def to_dict(self) -> dict:
        d: dict = {
            "player": self.player,
            "role": self.role,
            "minutes_total": self.minutes_total,
            "minutes_in_possession": self.minutes_in_possession,
            "minutes_out_of_possession": self.minutes_out_of_possession,
            "minutes_out_of_play": self.minutes_out_of_play,
            "qualified": self.qualified,
            "hi_runs_per30_in": self.hi_runs_per30_in,
            "hi_distance_per30_in": self.hi_distance_per30_in,
            "hi_runs_per30_out": self.hi_runs_per30_out,
            "hi_distance_per30_out": self.hi_distance_per30_out,
            "onball_hi_share": self.onball_hi_share,
            "carry3s_share": self.carry3s_share,
            "influence_coef": self.influence_coef,
            "influence_se": self.influence_se,
        }
        for k in MOVEMENT_KEYS:
            d[f"mt_{k}_per30"] = self.movement_per30[k]
        for k in MOVEMENT_KEYS:
            d[f"pct_{k}"] = self.movement_percentile[k]
        for k in CATEGORY_KEYS:
            d[f"reception_{k}_share"] = self.reception_share[k]
        for k in CATEGORY_KEYS:
            d[f"onball_actions_{k}_per30"] = self.onball_actions_per30[k]
        for k in CATEGORY_KEYS:
            d[f"epv_added_{k}_per30"] = self.epv_added_per30[k]
        return d


@dataclass(frozen=True)
class TeamStyle:
    team: str
    matches: int
    possession_share: float | None
    direct_play_share: float | None
    high_press_share: float | None
    hi_distance_attack_per30: float | None
    hi_distance_defense_per30: float | None
    total_distance_attack_per30: float | None
    total_distance_defense_per30: float | None
    xg_diff: float | None = None

    def to_dict(self) -> dict:
        return {
            "team": self.team,
            "matches": self.matches,
            "possession_share": self.possession_share,
            "direct_play_share": self.direct_play_share,
            "high_press_share": self.high_press_share,
            "hi_distance_attack_per30": self.hi_distance_attack_per30,
            "hi_distance_defense_per30": self.hi_distance_defense_per30,
            "total_distance_attack_per30": self.total_distance_attack_per30,
            "total_distance_defense_per30": self.total_distance_defense_per30,
            "xg_diff": self.xg_diff,
        }


class ProfileRepository:
    """Pooled season aggregates over the artifact dictionaries of many matches."""

    def __init__(self, config: PipelineConfig = DEFAULT_CONFIG):
        self.config = config
        self.cells: dict[tuple[str, str], _CellAgg] = {}
        self.teams: dict[str, _TeamAgg] = {}
        self.per_minute: list[dict] = []     # rows: match, team, minute, phase ms + distances
        self._samples: list[RunValueSample] = []
        self._model: RunInfluenceModel | None = None
        self._model_stale = True

    # -- ingestion of per-match artifacts --

    def add_match(
        self,
        effective_time: dict,
        contextual_runs: list[dict],
        valuation: dict,
        segments: dict,
    ) -> None:
        for team, t in effective_time["teams"].items():
            agg = self.teams.setdefault(team, _TeamAgg())
            agg.matches += 1
            agg.in_ms += t["in_possession_ms"]
            agg.out_ms += t["out_of_possession_ms"]
            agg.oop_ms += t["out_of_play_ms"]
            agg.dist_in_m += t["distance_in_m"]
            agg.dist_out_m += t["distance_out_m"]
            agg.hi_dist_in_m += t["hi_distance_in_m"]
            agg.hi_dist_out_m += t["hi_distance_out_m"]
        for seg in segments["annotated"]:
            if seg["team_id"] is None:
                continue
            dur = seg["t_end"] - seg["t_start"]
            agg = self.teams.setdefault(seg["team_id"], _TeamAgg())
            if seg["attack_type"] == "direct_play":
                agg.direct_play_ms += dur
            other = [t for t in effective_time["teams"] if t != seg["team_id"]]
            if len(other) == 1 and seg["defense_type"] == "high_pressure":
                self.teams.setdefault(other[0], _TeamAgg()).high_press_ms += dur

        for player, by_role in effective_time["players"].items():
            for role, rec in by_role.items():
                cell = self.cells.setdefault((player, role), _CellAgg())
                cell.in_ms += rec["in_possession_ms"]
                cell.out_ms += rec["out_of_possession_ms"]
                cell.oop_ms += rec["out_of_play_ms"]
                cell.dist_in_m += rec["distance_in_m"]
                cell.dist_out_m += rec["distance_out_m"]
                cell.hi_dist_in_m += rec["hi_distance_in_m"]
                cell.hi_dist_out_m += rec["hi_distance_out_m"]

        for r in contextual_runs:
            if not r["is_hi"] or r["role"] is None:
                continue
            cell = self.cells.setdefault((r["player"], r["role"]), _CellAgg())
            if r["phase"] == "in_possession":
                cell.hi_runs_in += 1
                if r["movement_type"] is not None:
                    cell.movement[r["movement_type"]] += 1
                if r.get("onball"):
                    cell.hi_runs_in_onball += 1
                if r.get("carry3s"):
                    cell.hi_runs_in_carry3s += 1
            elif r["phase"] == "out_of_possession":
                cell.hi_runs_out += 1

        for a in valuation["onball_actions"]:
            if a["role"] is None:
                continue
            cell = self.cells.setdefault((a["player"], a["role"]), _CellAgg())
            cat_now = a.get("category_at_reception")
            if cat_now is not None:
                cell.onball_counts[cat_now] += 1
            cat_pre = a.get("category_2s_before")
            if cat_pre is not None:
                cell.receptions[cat_pre] += 1
                if a.get("epv_added") is not None:
                    cell.epv_added[cat_pre] += a["epv_added"]

        for s in valuation["samples"]:
            self._samples.append(
                RunValueSample(
                    player_id=s["player"],
                    team_id=s["team"],
                    role=Role(s["role"]) if s["role"] else None,
                    t_start=s["t_start"],
                    t_end=s["t_end"],
                    epv_start=s["epv_start"],
                    epv_end=s["epv_end"],
                    angle=s["angle"],
                    distance=s["distance"],
                )
            )
        self.per_minute.extend(effective_time["per_minute"])
        self._model_stale = True

    # -- influence regression --

    def eligible_cells(self) -> set[tuple[str, str]]:
        min_ms = self.config.min_role_minutes * 60_000
        return {c for c, agg in self.cells.items() if agg.total_ms >= min_ms}

    def influence_model(self) -> RunInfluenceModel | None:
        if self._model_stale:
            try:
                self._model = fit_influence(
                    self._samples,
                    eligible_cells=self.eligible_cells(),
                    min_cell_samples=self.config.min_cell_samples,
                )
            except ValueError:
                self._model = None
            self._model_stale = False
        return self._model

    # -- player profiles --

    def qualified_cell(self, player: str, role: str) -> bool:
        agg = self.cells.get((player, role))
        return agg is not None and agg.total_ms >= self.config.min_role_minutes * 60_000

    def _role_percentiles(self, role: str) -> dict[str, dict[str, float]] | None:
        peers = {
            p: agg
            for (p, r), agg in self.cells.items()
            if r == role and self.qualified_cell(p, r)
        }
        if len(peers) < self.config.min_role_peers:
            return None
        out: dict[str, dict[str, float]] = {}
        for key in MOVEMENT_KEYS:
            freqs = {
                p: (per30(agg.movement[key], agg.in_ms) or 0.0) for p, agg in peers.items()
            }
            out[key] = midpoint_percentiles(freqs)
        return out

    def player_profile(self, player: str, role: str) -> PlayerProfile | None:
        agg = self.cells.get((player, role))
        if agg is None:
            return None
        qualified = self.qualified_cell(player, role)
        pct_by_type = self._role_percentiles(role) if qualified else None
        model = self.influence_model()
        coef = se = None
        if model is not None:
            key = (player, role)
            if key == model.reference_cell:
                coef, se = 0.0, None
            elif key in model.cell_coefs:
                coef, se = model.cell_coefs[key], model.cell_stderr[key]

        n_receptions = sum(agg.receptions.values())
        reception_share = {
            k: (agg.receptions[k] / n_receptions if n_receptions else None)
            for k in CATEGORY_KEYS
        }
        return PlayerProfile(
            player=player,
            role=role,
            minutes_total=agg.total_ms / 60_000,
            minutes_in_possession=agg.in_ms / 60_000,
            minutes_out_of_possession=agg.out_ms / 60_000,
            minutes_out_of_play=agg.oop_ms / 60_000,
            qualified=qualified,
            hi_runs_per30_in=per30(agg.hi_runs_in, agg.in_ms),
            hi_distance_per30_in=per30(agg.hi_dist_in_m, agg.in_ms),
            hi_runs_per30_out=per30(agg.hi_runs_out, agg.out_ms),
            hi_distance_per30_out=per30(agg.hi_dist_out_m, agg.out_ms),
            movement_per30={k: per30(agg.movement[k], agg.in_ms) for k in MOVEMENT_KEYS},
            movement_percentile={
                k: (pct_by_type[k].get(player) if pct_by_type else None) for k in MOVEMENT_KEYS
            },
            onball_hi_share=(agg.hi_runs_in_onball / agg.hi_runs_in) if agg.hi_runs_in else None,
            carry3s_share=(agg.hi_runs_in_carry3s / agg.hi_runs_in) if agg.hi_runs_in else None,
            reception_share=reception_share,
            onball_actions_per30={
                k: per30(agg.onball_counts[k], agg.in_ms) for k in CATEGORY_KEYS
            },
            epv_added_per30={k: per30(agg.epv_added[k], agg.in_ms) for k in CATEGORY_KEYS},
            influence_coef=coef,
            influence_se=se,
        )

    def profiles(self, role: str | None = None, qualified_only: bool = False) -> list[PlayerProfile]:
        out = []
        for (p, r) in sorted(self.cells):
            if role is not None and r != role:
                continue
            if qualified_only and not self.qualified_cell(p, r):
                continue
            prof = self.player_profile(p, r)
            if prof is not None:
                out.append(prof)
        return out

    # -- teams --

    def team_style(self, team: str, xg_diff: float | None = None) -> TeamStyle:
        agg = self.teams.get(team)
        if agg is None:
            raise KeyError(f"unknown team {team!r}")
        effective = agg.in_ms + agg.out_ms
        return TeamStyle(
            team=team,
            matches=agg.matches,
            possession_share=(agg.in_ms / effective) if effective else None,
            direct_play_share=(agg.direct_play_ms / agg.in_ms) if agg.in_ms else None,
            high_press_share=(agg.high_press_ms / agg.out_ms) if agg.out_ms else None,
            hi_distance_attack_per30=per30(agg.hi_dist_in_m, agg.in_ms),
            hi_distance_defense_per30=per30(agg.hi_dist_out_m, agg.out_ms),
            total_distance_attack_per30=per30(agg.dist_in_m, agg.in_ms),
            total_distance_defense_per30=per30(agg.dist_out_m, agg.out_ms),
            xg_diff=xg_diff,
        )

    def team_styles(self, xg: Mapping[str, float] | None = None) -> list[TeamStyle]:
        return [
            self.team_style(t, (xg or {}).get(t)) for t in sorted(self.teams)
        ]


# --- lineup aggregation -----------------------------------------------------


class LineupError(ValueError):
    def __init__(self, message: str, gaps: list[dict] | None = None):
        super().__init__(message)
        self.gaps = gaps or []


def lineup_aggregate(
    lineup: Sequence[tuple[str, str]],
    profile_lookup: Mapping[tuple[str, str], PlayerProfile],
) -> dict[str, float]:
    """Per-movement-type totals of the eleven (player, role) profiles.

    Summation uses math.fsum, so the result is exactly permutation-invariant.
    Missing or unqualified profiles raise LineupError listing every gap.
    """
    players = [p for p, _ in lineup]
    if len(set(players)) != len(players):
        dup = sorted({p for p in players if players.count(p) > 1})
        raise LineupError(f"duplicate players in lineup: {dup}")
    gaps = []
    for p, r in lineup:
        prof = profile_lookup.get((p, r))
        if prof is None:
            gaps.append({"player": p, "role": r, "reason": "no profile for this role"})
        elif not prof.qualified:
            gaps.append({"player": p, "role": r, "reason": "below the qualifying minutes"})
    if gaps:
        raise LineupError("lineup references unavailable (player, role) profiles", gaps)
    totals = {}
    for key in MOVEMENT_KEYS:
        totals[key] = math.fsum(
            profile_lookup[(p, r)].movement_per30[key] or 0.0 for p, r in lineup
        )
    return totals


def lineup_diff(totals_a: Mapping[str, float], totals_b: Mapping[str, float]) -> dict[str, float]:
    return {k: totals_b[k] - totals_a[k] for k in MOVEMENT_KEYS}


# --- team-style PCA ---------------------------------------------------------

DEFAULT_PCA_COLUMNS = (
    "hi_distance_attack_per30",
    "hi_distance_defense_per30",
    "possession_share",
    "direct_play_share",
    "high_press_share",
)


def style_pca(
    styles: Sequence[TeamStyle], columns: Sequence[str] = DEFAULT_PCA_COLUMNS
) -> dict:
    """Loadings, scores, explained-variance ratios, and the raw correlation
    matrix over the selected team-style columns."""
    if len(styles) < 3:
        raise ValueError("need at least 3 teams")
    rows = []
    for s in styles:
        d = s.to_dict()
        vals = [d[c] for c in columns]
        if any(v is None for v in vals):
            missing = [c for c, v in zip(columns, vals) if v is None]
            raise ValueError(f"team {s.team}: missing cells in {missing}")
        rows.append(vals)
    X = np.array(rows, dtype=np.float64)
    pca = StandardizedPCA(column_names=list(columns)).fit(X)
    scores = pca.transform(X)
    return {
        "teams": [s.team for s in styles],
        "columns": list(columns),
        "explained_variance_ratio": pca.explained_variance_ratio_.tolist(),
        "loadings": pca.components_.tolist(),
        "scores": scores.tolist(),
        "correlation": pca.correlation_.tolist(),
    }


# --- minute curves ----------------------------------------------------------


def minute_curves(per_minute_rows: Sequence[dict], rolling_window: int = 5) -> list[dict]:
    """Per-minute defensive distance table with variation-vs-mean series.

    Input rows carry (match, team, minute, out_possession_ms, distance_out_m,
    hi_distance_out_m); each row is normalized per 60 s of effective
    out-of-possession time, minutes are averaged across rows, and the
    variation series is smoothed with a centered rolling mean.
    """
    by_minute: dict[int, list[tuple[float, float]]] = {}
    for r in per_minute_rows:
        if r["out_possession_ms"] <= 0:
            continue
        scale = 60_000.0 / r["out_possession_ms"]
        by_minute.setdefault(r["minute"], []).append(
            (r["distance_out_m"] * scale, r["hi_distance_out_m"] * scale)
        )
    if not by_minute:
        return []
    minutes = sorted(by_minute)
    dist = np.array([np.mean([v[0] for v in by_minute[m]]) for m in minutes])
    hi = np.array([np.mean([v[1] for v in by_minute[m]]) for m in minutes])
    mean_d, mean_h = dist.mean(), hi.mean()
    var_d = (dist - mean_d) / mean_d if mean_d else np.zeros_like(dist)
    var_h = (hi - mean_h) / mean_h if mean_h else np.zeros_like(hi)

    def smooth(a: np.ndarray) -> np.ndarray:
        kernel = np.ones(rolling_window)
        return np.convolve(a, kernel, "same") / np.convolve(np.ones(len(a)), kernel, "same")

    sm_d, sm_h = smooth(var_d), smooth(var_h)
    sm_dist, sm_hi = smooth(dist), smooth(hi)
    return [
        {
            "minute": m,
            "distance_per60": float(dist[i]),
            "hi_distance_per60": float(hi[i]),
            "variation_distance": float(var_d[i]),
            "variation_hi": float(var_h[i]),
            "smoothed_variation_distance": float(sm_d[i]),
            "smoothed_variation_hi": float(sm_h[i]),
            "smoothed_distance_per60": float(sm_dist[i]),
            "smoothed_hi_distance_per60": float(sm_hi[i]),
        }
        for i, m in enumerate(minutes)
    ]

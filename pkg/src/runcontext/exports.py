"""Named analysis tables exported from an artifact store.

Every analysis has a stable column schema (documented in docs/schemas.md), a
fig* code matching the bundled report layouts, and a semantic alias. Rows are
deterministically ordered.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Callable, Mapping

from .config import PipelineConfig
from .io.store import ArtifactStore
from .profiles import (
    CATEGORY_KEYS,
    MOVEMENT_KEYS,
    ProfileRepository,
    minute_curves,
    style_pca,
)


class UnknownAnalysisError(ValueError):
    def __init__(self, name: str, valid: list[str]):
        self.valid = valid
        super().__init__(f"unknown analysis {name!r}; valid names: {', '.join(valid)}")


def load_repository(store: ArtifactStore, config: PipelineConfig | None = None) -> ProfileRepository:
    repo = ProfileRepository(config or store.config())
    for mid in store.match_ids():
        repo.add_match(
            effective_time=store.load(mid, "effective_time"),
            contextual_runs=store.load(mid, "contextual_runs"),
            valuation=store.load(mid, "valuation"),
            segments=store.load(mid, "segments"),
        )
    return repo


Filters = Mapping[str, object]  # player/role/team filters plus optional xg_map


def _profiles(repo: ProfileRepository, filters: Filters, qualified_only=True):
    profs = repo.profiles(role=filters.get("role"), qualified_only=qualified_only)
    player = filters.get("player")
    if player is not None:
        profs = [p for p in profs if p.player == player]
    return profs


def _fig5(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    cols = ["role", "player", "hi_distance_per30_in", "hi_distance_per30_out"]
    rows = [
        {
            "role": p.role,
            "player": p.player,
            "hi_distance_per30_in": p.hi_distance_per30_in,
            "hi_distance_per30_out": p.hi_distance_per30_out,
        }
        for p in _profiles(repo, filters)
        if p.role != "goalkeeper"
    ]
    rows.sort(key=lambda r: (r["role"], r["player"]))
    return cols, rows


def _fig6(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    cols = ["team", "phase", "total_distance_per30", "hi_distance_per30"]
    rows = []
    for s in repo.team_styles():
        if filters.get("team") and s.team != filters["team"]:
            continue
        rows.append(
            {
                "team": s.team,
                "phase": "in_possession",
                "total_distance_per30": s.total_distance_attack_per30,
                "hi_distance_per30": s.hi_distance_attack_per30,
            }
        )
        rows.append(
            {
                "team": s.team,
                "phase": "out_of_possession",
                "total_distance_per30": s.total_distance_defense_per30,
                "hi_distance_per30": s.hi_distance_defense_per30,
            }
        )
    return cols, rows


def _fig7(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    cols = [
        "team",
        "hi_distance_attack_per30",
        "hi_distance_defense_per30",
        "possession_share",
        "xg_diff",
    ]
    xg = filters.get("xg_map") or {}
    rows = [
        {k: v for k, v in s.to_dict().items() if k in cols}
        for s in repo.team_styles(xg)
        if not filters.get("team") or s.team == filters["team"]
    ]
    return cols, rows


def _run_pca(repo: ProfileRepository) -> dict:
    return style_pca(repo.team_styles())


def _fig8(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    res = _run_pca(repo)
    cols = ["team", "pc1", "pc2"]
    rows = [
        {"team": t, "pc1": s[0], "pc2": s[1] if len(s) > 1 else None}
        for t, s in zip(res["teams"], res["scores"])
    ]
    return cols, rows


def _fig8_loadings(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    res = _run_pca(repo)
    cols = ["component", "explained_variance_ratio"] + list(res["columns"])
    rows = []
    for i, loading in enumerate(res["loadings"]):
        row = {"component": i + 1, "explained_variance_ratio": res["explained_variance_ratio"][i]}
        row.update({c: v for c, v in zip(res["columns"], loading)})
        rows.append(row)
    return cols, rows


def _fig9(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    cols = ["role", "player", "category", "share"]
    rows = []
    for p in _profiles(repo, filters):
        vals = {k: (p.onball_actions_per30[k] or 0.0) for k in CATEGORY_KEYS}
        total = sum(vals.values())
        for k in CATEGORY_KEYS:
            rows.append(
                {
                    "role": p.role,
                    "player": p.player,
                    "category": k,
                    "share": (vals[k] / total) if total else None,
                }
            )
    return cols, rows


def _fig10(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    cols = ["player", "role", "onball_hi_share", "hi_runs_per30_in", "carry3s_share"]
    rows = [
        {
            "player": p.player,
            "role": p.role,
            "onball_hi_share": p.onball_hi_share,
            "hi_runs_per30_in": p.hi_runs_per30_in,
            "carry3s_share": p.carry3s_share,
        }
        for p in _profiles(repo, filters)
    ]
    return cols, rows


def _fig11(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    cols = ["player", "role", "movement_type", "per30", "percentile"]
    rows = []
    for p in _profiles(repo, filters):
        for k in MOVEMENT_KEYS:
            rows.append(
                {
                    "player": p.player,
                    "role": p.role,
                    "movement_type": k,
                    "per30": p.movement_per30[k],
                    "percentile": p.movement_percentile[k],
                }
            )
    return cols, rows


def _fig13(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    cols = ["player", "role", "category", "share"]
    rows = []
    for p in _profiles(repo, filters):
        for k in CATEGORY_KEYS:
            rows.append(
                {"player": p.player, "role": p.role, "category": k, "share": p.reception_share[k]}
            )
    return cols, rows


def _fig14(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    cols = ["player", "role", "category", "epv_added_per30", "actions_per30"]
    rows = []
    for p in _profiles(repo, filters):
        for k in CATEGORY_KEYS:
            rows.append(
                {
                    "player": p.player,
                    "role": p.role,
                    "category": k,
                    "epv_added_per30": p.epv_added_per30[k],
                    "actions_per30": p.onball_actions_per30[k],
                }
            )
    return cols, rows


def _fig15(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    cols = [
        "player",
        "role",
        "influence_coef",
        "influence_se",
        "hi_distance_per30_in",
        "onball_epv_added_per30",
    ]
    rows = []
    for p in _profiles(repo, filters):
        epv_total = sum(v or 0.0 for v in p.epv_added_per30.values())
        rows.append(
            {
                "player": p.player,
                "role": p.role,
                "influence_coef": p.influence_coef,
                "influence_se": p.influence_se,
                "hi_distance_per30_in": p.hi_distance_per30_in,
                "onball_epv_added_per30": epv_total,
            }
        )
    return cols, rows


def _fig16(repo: ProfileRepository, filters: Filters) -> tuple[list[str], list[dict]]:
    rows = minute_curves(
        [r for r in repo.per_minute if not filters.get("team") or r["team"] == filters["team"]],
        rolling_window=repo.config.minute_rolling_window,
    )
    cols = [
        "minute",
        "distance_per60",
        "hi_distance_per60",
        "variation_distance",
        "variation_hi",
        "smoothed_variation_distance",
        "smoothed_variation_hi",
        "smoothed_distance_per60",
        "smoothed_hi_distance_per60",
    ]
    return cols, rows


_ANALYSES: dict[str, Callable[[ProfileRepository, Filters], tuple[list[str], list[dict]]]] = {
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig8": _fig8,
    "fig8_loadings": _fig8_loadings,
    "fig9": _fig9,
    "fig10": _fig10,
    "fig11": _fig11,
    "fig13": _fig13,
    "fig14": _fig14,
    "fig15": _fig15,
    "fig16": _fig16,
}

ALIASES = {
    "role-distances": "fig5",
    "phase-distances": "fig6",
    "team-scatter": "fig7",
    "style-pca": "fig8",
    "style-pca-loadings": "fig8_loadings",
    "onball-speeds": "fig9",
    "onball-participation": "fig10",
    "run-types": "fig11",
    "reception-speeds": "fig13",
    "epv-speeds": "fig14",
    "influence": "fig15",
    "minute-curves": "fig16",
}


def analysis_names() -> list[str]:
    return sorted(_ANALYSES) + sorted(ALIASES)


def run_analysis(
    name: str, repo: ProfileRepository, filters: Filters | None = None
) -> tuple[list[str], list[dict]]:
    key = ALIASES.get(name, name)
    fn = _ANALYSES.get(key)
    if fn is None:
        raise UnknownAnalysisError(name, analysis_names())
    return fn(repo, filters or {})


def write_table(columns: list[str], rows: list[dict], path: str | Path, fmt: str = "csv") -> None:
    path = Path(path)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
            w.writeheader()
            for r in rows:
                w.writerow({c: ("" if r.get(c) is None else r.get(c)) for c in columns})
    elif fmt == "json":
        path.write_text(json.dumps(rows, indent=1, sort_keys=True) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")

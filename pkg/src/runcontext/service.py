"""Read-only HTTP facade over an artifact store.

The store snapshot is loaded once at app creation; every numeric field served
comes from the same aggregation code the CLI exports use, so the two surfaces
can never drift. Lineup comparison is a pure computation and is not persisted.
"""
from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .config import PipelineConfig
from .exports import load_repository
from .formations import DEFAULT_TEMPLATES, simplify_role
from .io.store import ArtifactStore
from .profiles import MOVEMENT_KEYS, LineupError, lineup_aggregate, lineup_diff


class LineupEntry(BaseModel):
    player: str
    role: str


class CompareRequest(BaseModel):
    lineup_a: list[LineupEntry] = Field(min_length=11, max_length=11)
    lineup_b: list[LineupEntry] = Field(min_length=11, max_length=11)


def create_app(store_path: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    store = ArtifactStore(store_path)
    config: PipelineConfig = store.config()
    repo = load_repository(store, config)
    profile_lookup = {(p.player, p.role): p for p in repo.profiles()}

    app = FastAPI(title="runcontext profile service", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        # malformed JSON is a 400; well-formed but invalid bodies stay 422
        if any(e.get("type") == "json_invalid" for e in exc.errors()):
            return JSONResponse(status_code=400, content={"detail": "malformed JSON body"})
        return JSONResponse(status_code=422, content={"detail": exc.errors()})

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "matches": store.match_ids(),
            "config_hash": store.manifest.get("config_hash"),
        }

    @app.get("/config")
    def served_config() -> dict:
        return {
            "config": config.to_dict(),
            "movement_types": list(MOVEMENT_KEYS),
            "roles": sorted({r for (_, r) in repo.cells}),
            "pitch": {"length": 105.0, "width": 68.0},
            "templates": [
                {
                    "name": t.name,
                    "slots": [
                        {
                            "label": s.label,
                            "role": simplify_role(s.role, s.side).value,
                            "side": s.side,
                            "x": s.x,
                            "y": s.y,
                        }
                        for s in t.slots
                    ],
                }
                for t in DEFAULT_TEMPLATES
            ],
        }

    @app.get("/players")
    def players(role: str | None = None, min_minutes: float = 0.0) -> list[dict]:
        out = []
        for (p, r) in sorted(repo.cells):
            if role is not None and r != role:
                continue
            minutes = repo.cells[(p, r)].total_ms / 60_000
            if minutes < min_minutes:
                continue
            out.append(
                {
                    "player": p,
                    "role": r,
                    "minutes_total": minutes,
                    "qualified": repo.qualified_cell(p, r),
                }
            )
        return out

    @app.get("/players/{player_id}/profile")
    def player_profile(player_id: str, role: str | None = None) -> dict:
        roles = sorted(r for (p, r) in repo.cells if p == player_id)
        if not roles:
            raise HTTPException(404, f"unknown player {player_id!r}")
        if role is None:
            role = max(roles, key=lambda r: repo.cells[(player_id, r)].total_ms)
        prof = repo.player_profile(player_id, role)
        if prof is None:
            raise HTTPException(404, f"no profile for ({player_id}, {role})")
        return prof.to_dict()

    @app.get("/teams/{team_id}/style")
    def team_style(team_id: str) -> dict:
        try:
            return repo.team_style(team_id).to_dict()
        except KeyError:
            raise HTTPException(404, f"unknown team {team_id!r}")

    @app.get("/roles/{role}/percentiles")
    def role_percentiles(role: str) -> dict:
        known = {r for (_, r) in repo.cells}
        if role not in known:
            raise HTTPException(404, f"unknown role {role!r}")
        pct = repo._role_percentiles(role)
        return {
            "role": role,
            "min_peers": repo.config.min_role_peers,
            "percentiles": pct if pct is not None else None,
        }

    @app.post("/lineups/compare")
    def compare(body: CompareRequest) -> dict:
        try:
            a = lineup_aggregate([(e.player, e.role) for e in body.lineup_a], profile_lookup)
            b = lineup_aggregate([(e.player, e.role) for e in body.lineup_b], profile_lookup)
        except LineupError as e:
            raise HTTPException(422, detail={"message": str(e), "gaps": e.gaps})
        return {"totals_a": a, "totals_b": b, "deltas": lineup_diff(a, b)}

    if ui_dir is None:
        default_ui = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = default_ui if default_ui.is_dir() else None
    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

"""Command-line surface: ingest, process, analyze, export, synth, serve.

Exit codes: 0 success, 2 validation error, 3 partial failure (some matches
processed, some failed).
"""
from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from .config import DEFAULT_CONFIG, PipelineConfig
from .exports import UnknownAnalysisError, load_repository, run_analysis, write_table
from .io.formats import IngestError, ingest as ingest_bundle
from .io.store import ArtifactStore
from .pipeline import process_bundle
from .profiles import LineupError, lineup_aggregate, lineup_diff, style_pca
from .synth import ScriptError, generate, load_script

EXIT_VALIDATION = 2
EXIT_PARTIAL = 3


def _load_config(path: str | None) -> PipelineConfig:
    return PipelineConfig.load(path) if path else DEFAULT_CONFIG


@click.group()
def main() -> None:
    """Contextualized physical-performance profiles from tracking data."""


@main.command("ingest")
@click.argument("tracking", type=click.Path(exists=True))
@click.argument("events", type=click.Path(exists=True))
@click.argument("meta", type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def ingest_cmd(tracking: str, events: str, meta: str, config_path: str | None) -> None:
    """Validate one match's input files and print the lint report."""
    try:
        bundle = ingest_bundle(tracking, events, meta, _load_config(config_path))
    except IngestError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_VALIDATION)
    n_frames = sum(len(s) for s in bundle.sequences)
    click.echo(
        f"ok: match {bundle.match_id}: {n_frames} frames in {len(bundle.sequences)} "
        f"sequence(s), {len(bundle.events)} events"
    )
    for msg in bundle.lint:
        click.echo(f"lint: {msg}")


def _match_paths(match_dir: Path) -> tuple[Path, Path, Path]:
    return match_dir / "tracking.jsonl", match_dir / "events.json", match_dir / "meta.json"


def _process_one(
    match_dir: str,
    config_dict: dict,
    epv_path: str | None = None,
    templates_path: str | None = None,
) -> tuple[str, dict[str, object]]:
    from .formations import load_templates
    from .valuation import CsvEpv

    config = PipelineConfig.from_dict(config_dict)
    tracking, events, meta = _match_paths(Path(match_dir))
    bundle = ingest_bundle(tracking, events, meta, config)
    provider = CsvEpv(epv_path) if epv_path else None
    templates = load_templates(templates_path) if templates_path else None
    return bundle.match_id, process_bundle(bundle, config, provider, templates)


@main.command("process")
@click.argument("match_dirs", nargs=-1, required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--jobs", default=1, show_default=True, help="parallel match workers")
@click.option(
    "--epv",
    "epv_path",
    type=click.Path(exists=True),
    default=None,
    help="CSV of precomputed possession values (t_ms, team, value); default is the surrogate model",
)
@click.option(
    "--templates",
    "templates_path",
    type=click.Path(exists=True),
    default=None,
    help="JSON formation template library replacing the built-in one",
)
def process_cmd(
    match_dirs: tuple[str, ...],
    store_path: str,
    config_path: str | None,
    jobs: int,
    epv_path: str | None,
    templates_path: str | None,
) -> None:
    """Run the full pipeline on match directories into an artifact store.

    Each directory holds tracking.jsonl, events.json, and meta.json.
    """
    config = _load_config(config_path)
    store = ArtifactStore.create(store_path, config)
    failures = 0
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                d: pool.submit(_process_one, d, config.to_dict(), epv_path, templates_path)
                for d in match_dirs
            }
            for d, fut in futures.items():
                try:
                    match_id, artifacts = fut.result()
                    store.write_match(match_id, artifacts)
                    click.echo(f"processed {match_id} ({d})")
                except Exception as e:  # noqa: BLE001 - per-match isolation
                    failures += 1
                    store.record_failure(Path(d).name, str(e))
                    click.echo(f"failed {d}: {e}", err=True)
    else:
        for d in match_dirs:
            try:
                match_id, artifacts = _process_one(d, config.to_dict(), epv_path, templates_path)
                store.write_match(match_id, artifacts)
                click.echo(f"processed {match_id} ({d})")
            except Exception as e:  # noqa: BLE001
                failures += 1
                store.record_failure(Path(d).name, str(e))
                click.echo(f"failed {d}: {e}", err=True)
    if failures == len(match_dirs):
        sys.exit(EXIT_VALIDATION)
    if failures:
        sys.exit(EXIT_PARTIAL)


@main.command("synth")
@click.argument("script", type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def synth_cmd(script: str, out_dir: str) -> None:
    """Generate a scripted match (tracking, events, meta, ground truth)."""
    try:
        match = generate(load_script(script))
    except ScriptError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_VALIDATION)
    paths = match.write(out_dir)
    for kind, p in paths.items():
        click.echo(f"wrote {kind}: {p}")


@main.command("profile")
@click.argument("player")
@click.option("--role", default=None)
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), default=None)
def profile_cmd(player: str, role: str | None, store_path: str, out_path: str | None) -> None:
    """Print (or write) one player's season profile as JSON."""
    repo = load_repository(ArtifactStore(store_path))
    roles = sorted(r for (p, r) in repo.cells if p == player)
    if not roles:
        click.echo(f"error: no data for player {player!r}", err=True)
        sys.exit(EXIT_VALIDATION)
    if role is None:
        role = max(roles, key=lambda r: repo.cells[(player, r)].total_ms)
    prof = repo.player_profile(player, role)
    if prof is None:
        click.echo(f"error: no profile for ({player}, {role})", err=True)
        sys.exit(EXIT_VALIDATION)
    text = json.dumps(prof.to_dict(), indent=1, sort_keys=True)
    if out_path:
        Path(out_path).write_text(text + "\n")
    else:
        click.echo(text)


def _read_xg(path: str | None) -> dict[str, float]:
    """Optional side input: CSV of (team, xg_diff)."""
    if path is None:
        return {}
    import csv as _csv

    with open(path, newline="") as fh:
        return {row["team"]: float(row["xg_diff"]) for row in _csv.DictReader(fh)}


@main.command("team-style")
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--team", default=None)
@click.option("--xg", "xg_path", type=click.Path(exists=True), default=None,
              help="optional CSV of (team, xg_diff) to join in")
def team_style_cmd(store_path: str, team: str | None, xg_path: str | None) -> None:
    repo = load_repository(ArtifactStore(store_path))
    styles = repo.team_styles(_read_xg(xg_path))
    if team is not None:
        styles = [s for s in styles if s.team == team]
    click.echo(json.dumps([s.to_dict() for s in styles], indent=1, sort_keys=True))


@main.command("pca")
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--columns", default=None, help="comma-separated team-style columns")
def pca_cmd(store_path: str, columns: str | None) -> None:
    repo = load_repository(ArtifactStore(store_path))
    try:
        if columns:
            res = style_pca(repo.team_styles(), columns.split(","))
        else:
            res = style_pca(repo.team_styles())
    except ValueError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(json.dumps(res, indent=1))


def _read_lineup(path: str) -> list[tuple[str, str]]:
    raw = json.loads(Path(path).read_text())
    return [(e["player"], e["role"]) for e in raw]


@main.command("lineup-compare")
@click.argument("file_a", type=click.Path(exists=True))
@click.argument("file_b", type=click.Path(exists=True))
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
def lineup_compare_cmd(file_a: str, file_b: str, store_path: str) -> None:
    """Aggregate two lineups' movement-type rates and print the deltas."""
    repo = load_repository(ArtifactStore(store_path))
    lookup = {(p.player, p.role): p for p in repo.profiles()}
    try:
        a = lineup_aggregate(_read_lineup(file_a), lookup)
        b = lineup_aggregate(_read_lineup(file_b), lookup)
    except LineupError as e:
        click.echo(f"error: {e}\n{json.dumps(e.gaps, indent=1)}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(
        json.dumps(
            {"lineup_a": a, "lineup_b": b, "deltas": lineup_diff(a, b)}, indent=1, sort_keys=True
        )
    )


@main.command("export")
@click.argument("analysis")
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--player", default=None)
@click.option("--role", default=None)
@click.option("--team", default=None)
@click.option("--xg", "xg_path", type=click.Path(exists=True), default=None,
              help="optional CSV of (team, xg_diff) joined into team tables")
def export_cmd(
    analysis: str,
    store_path: str,
    out_path: str,
    fmt: str,
    player: str | None,
    role: str | None,
    team: str | None,
    xg_path: str | None,
) -> None:
    """Write one analysis table (see docs/schemas.md for column schemas)."""
    repo = load_repository(ArtifactStore(store_path))
    try:
        cols, rows = run_analysis(
            analysis,
            repo,
            {"player": player, "role": role, "team": team, "xg_map": _read_xg(xg_path)},
        )
    except UnknownAnalysisError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_VALIDATION)
    write_table(cols, rows, out_path, fmt)
    click.echo(f"wrote {len(rows)} rows to {out_path}")


@main.command("serve")
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--port", default=8008, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui", "ui_dir", type=click.Path(exists=True), default=None)
def serve_cmd(store_path: str, port: int, host: str, ui_dir: str | None) -> None:
    """Serve the read-only profile API (and the UI bundle when present)."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(store_path, ui_dir), host=host, port=port)


if __name__ == "__main__":
    main()

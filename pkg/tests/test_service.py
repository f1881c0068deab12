from __future__ import annotations

import concurrent.futures
import csv
import json

import pytest

fastapi = pytest.importorskip("fastapi")
from fastapi.testclient import TestClient

from fixtures_store import LINEUP_A, LINEUP_B, build_profile_store
from runcontext.exports import load_repository, run_analysis, write_table
from runcontext.io.store import ArtifactStore
from runcontext.service import create_app


@pytest.fixture(scope="module")
def store_path(tmp_path_factory):
    root = tmp_path_factory.mktemp("store") / "season-store"
    build_profile_store(root)
    return root


@pytest.fixture(scope="module")
def client(store_path):
    return TestClient(create_app(store_path))


class TestEndpoints:
    def test_health(self, client):
        r = client.get("/health")
        assert r.status_code == 200
        assert r.json()["status"] == "ok"
        assert r.json()["matches"] == ["season"]

    def test_players_filter_by_role_and_minutes(self, client):
        r = client.get("/players", params={"role": "striker", "min_minutes": 450})
        assert r.status_code == 200
        players = {p["player"] for p in r.json()}
        assert "runner" in players and "benchkid" not in players
        assert all(p["qualified"] for p in r.json())

    def test_unqualified_listed_without_filter(self, client):
        r = client.get("/players", params={"role": "striker"})
        rec = next(p for p in r.json() if p["player"] == "benchkid")
        assert rec["qualified"] is False

    def test_profile_known_player(self, client):
        r = client.get("/players/runner/profile", params={"role": "striker"})
        assert r.status_code == 200
        body = r.json()
        assert body["mt_inside_to_back_per30"] == pytest.approx(3.2, abs=1e-12)
        assert body["qualified"] is True

    def test_profile_unknown_player_404(self, client):
        assert client.get("/players/nobody/profile").status_code == 404

    def test_team_style(self, client):
        r = client.get("/teams/h/style")
        assert r.status_code == 200
        assert r.json()["possession_share"] == pytest.approx(0.5)
        assert r.json()["direct_play_share"] == pytest.approx(1.0)
        assert client.get("/teams/zz/style").status_code == 404

    def test_role_percentiles(self, client):
        r = client.get("/roles/striker/percentiles")
        assert r.status_code == 200
        pct = r.json()["percentiles"]["inside_to_back"]
        assert pct["runner"] == max(pct.values())
        assert client.get("/roles/wizard/percentiles").status_code == 404

    def test_profile_json_matches_export_csv(self, client, store_path, tmp_path):
        cols, rows = run_analysis(
            "fig11", load_repository(ArtifactStore(store_path)), {"player": "runner"}
        )
        path = tmp_path / "fig11.csv"
        write_table(cols, rows, path)
        with open(path) as fh:
            csv_rows = {r["movement_type"]: r for r in csv.DictReader(fh)}
        body = client.get("/players/runner/profile", params={"role": "striker"}).json()
        assert len(csv_rows) == 6
        for mt, row in csv_rows.items():
            served = body[f"mt_{mt}_per30"]
            assert float(row["per30"]) == pytest.approx(served, abs=1e-12)
            pct = body[f"pct_{mt}"]
            assert (row["percentile"] == "" and pct is None) or float(
                row["percentile"]
            ) == pytest.approx(pct)


class TestLineupCompare:
    def test_identical_lineups_zero_deltas(self, client):
        r = client.post("/lineups/compare", json={"lineup_a": LINEUP_A, "lineup_b": LINEUP_A})
        assert r.status_code == 200
        assert all(v == 0.0 for v in r.json()["deltas"].values())

    def test_swap_updates_inside_to_back_exactly(self, client):
        r = client.post("/lineups/compare", json={"lineup_a": LINEUP_A, "lineup_b": LINEUP_B})
        assert r.status_code == 200
        body = r.json()
        assert body["totals_a"]["inside_to_back"] == pytest.approx(17.6, abs=1e-12)
        assert body["totals_b"]["inside_to_back"] == pytest.approx(14.4, abs=1e-12)
        assert body["deltas"]["inside_to_back"] == pytest.approx(-3.2, abs=1e-12)

    def test_sub_450_player_422_with_gap_list(self, client):
        lineup = LINEUP_A[:-1] + [{"player": "benchkid", "role": "striker"}]
        r = client.post("/lineups/compare", json={"lineup_a": lineup, "lineup_b": LINEUP_A})
        assert r.status_code == 422
        gaps = r.json()["detail"]["gaps"]
        assert {"player": "benchkid", "role": "striker", "reason": "below the qualifying minutes"} in gaps

    def test_duplicate_player_422(self, client):
        lineup = LINEUP_A[:-1] + [{"player": "runner", "role": "striker"}]
        r = client.post("/lineups/compare", json={"lineup_a": lineup, "lineup_b": LINEUP_A})
        assert r.status_code == 422
        assert "duplicate" in r.json()["detail"]["message"]

    def test_wrong_size_lineup_422(self, client):
        r = client.post(
            "/lineups/compare", json={"lineup_a": LINEUP_A[:5], "lineup_b": LINEUP_A}
        )
        assert r.status_code == 422

    def test_malformed_json_400(self, client):
        r = client.post(
            "/lineups/compare",
            content=b'{"lineup_a": [',
            headers={"content-type": "application/json"},
        )
        assert r.status_code == 400

    def test_concurrent_identical_requests_identical_bodies(self, client):
        def call():
            return client.post(
                "/lineups/compare", json={"lineup_a": LINEUP_A, "lineup_b": LINEUP_B}
            ).text

        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
            bodies = list(pool.map(lambda _: call(), range(16)))
        assert len(set(bodies)) == 1


class TestUiHosting:
    def test_config_serves_templates_and_pitch(self, client):
        body = client.get("/config").json()
        assert body["pitch"] == {"length": 105.0, "width": 68.0}
        names = [t["name"] for t in body["templates"]]
        assert "4-3-3" in names and "3-4-2-1" in names
        slots = next(t for t in body["templates"] if t["name"] == "4-3-3")["slots"]
        assert len(slots) == 10
        assert {s["role"] for s in slots} <= {
            "central_defender",
            "full_back",
            "defensive_midfielder",
            "midfielder",
            "winger",
            "striker",
        }

    def test_static_bundle_served_when_built(self, store_path):
        import pathlib

        dist = pathlib.Path(__file__).resolve().parents[1] / "frontend" / "dist"
        if not dist.is_dir():
            pytest.skip("frontend bundle not built")
        ui_client = TestClient(create_app(store_path, ui_dir=dist))
        index = ui_client.get("/")
        assert index.status_code == 200
        assert "Lineup explorer" in index.text
        js = ui_client.get("/js/main.js")
        assert js.status_code == 200
        # API routes still win over the static mount
        assert ui_client.get("/health").json()["status"] == "ok"

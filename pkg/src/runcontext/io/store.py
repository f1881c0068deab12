"""On-disk artifact store: plain JSON files plus a manifest with content hashes.

Inspectable and diff-able by design; determinism is checked by hashing the
canonical JSON encoding of every artifact.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..config import PipelineConfig

MANIFEST_NAME = "manifest.json"
STORE_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


class ArtifactStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._manifest_path = self.root / MANIFEST_NAME
        if self._manifest_path.exists():
            self.manifest = json.loads(self._manifest_path.read_text())
        else:
            self.manifest = {"version": STORE_VERSION, "config_hash": None, "matches": {}}

    @classmethod
    def create(cls, root: str | Path, config: PipelineConfig) -> "ArtifactStore":
        store = cls(root)
        store.root.mkdir(parents=True, exist_ok=True)
        (store.root / "config.json").write_text(
            json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"
        )
        store.manifest["config_hash"] = config.content_hash()
        store._flush()
        return store

    def config(self) -> PipelineConfig:
        return PipelineConfig.from_dict(json.loads((self.root / "config.json").read_text()))

    def _flush(self) -> None:
        self._manifest_path.write_text(
            json.dumps(self.manifest, indent=1, sort_keys=True) + "\n"
        )

    def write_match(self, match_id: str, artifacts: dict[str, object]) -> None:
        match_dir = self.root / "matches" / match_id
        match_dir.mkdir(parents=True, exist_ok=True)
        entry = {"status": "ok", "artifacts": {}}
        for kind, payload in sorted(artifacts.items()):
            text = canonical_json(payload)
            rel = f"matches/{match_id}/{kind}.json"
            (self.root / rel).write_text(text + "\n")
            entry["artifacts"][kind] = {"path": rel, "sha256": _sha256(text)}
        self.manifest["matches"][match_id] = entry
        self._flush()

    def record_failure(self, match_id: str, error: str) -> None:
        self.manifest["matches"][match_id] = {"status": "failed", "error": error, "artifacts": {}}
        self._flush()

    def match_ids(self, ok_only: bool = True) -> list[str]:
        return sorted(
            mid
            for mid, e in self.manifest["matches"].items()
            if not ok_only or e["status"] == "ok"
        )

    def failed_match_ids(self) -> list[str]:
        return sorted(
            mid for mid, e in self.manifest["matches"].items() if e["status"] == "failed"
        )

    def load(self, match_id: str, kind: str) -> object:
        entry = self.manifest["matches"][match_id]["artifacts"][kind]
        return json.loads((self.root / entry["path"]).read_text())

    def artifact_kinds(self, match_id: str) -> list[str]:
        return sorted(self.manifest["matches"][match_id]["artifacts"].keys())

    def content_hashes(self) -> dict[str, dict[str, str]]:
        return {
            mid: {k: v["sha256"] for k, v in e["artifacts"].items()}
            for mid, e in self.manifest["matches"].items()
        }

from .formats import (
    IngestError,
    MatchBundle,
    MatchView,
    ingest,
    read_events,
    read_meta,
    read_tracking,
    write_events,
    write_meta,
    write_tracking,
)
from .store import ArtifactStore, canonical_json

__all__ = [
    "IngestError",
    "MatchBundle",
    "MatchView",
    "ingest",
    "read_events",
    "read_meta",
    "read_tracking",
    "write_events",
    "write_meta",
    "write_tracking",
    "ArtifactStore",
    "canonical_json",
]

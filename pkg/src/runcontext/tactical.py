"""Defensive structure per frame and zone/movement classification of runs.

Geometry convention for this module: coordinates are normalized so the team
*attacking* the block moves toward +x, which means the defending side protects
the +x goal. "Behind the last line" is therefore x greater than the deepest
line. Goalkeepers never contribute to lines or block.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .cluster import DepthKMeans
from .geometry import DegenerateGeometryError, convex_hull, point_in_convex
from .kinematics import RunEffort


class Zone(Enum):
    INSIDE = "inside"
    WING = "wing"
    BACK = "back"
    FRONT = "front"


class MovementType(Enum):
    """Origin->destination zone pairs kept for profiling; origins are
    restricted to inside/wing, destinations to inside/wing/back."""

    INSIDE_TO_INSIDE = "inside_to_inside"
    INSIDE_TO_WING = "inside_to_wing"
    INSIDE_TO_BACK = "inside_to_back"
    WING_TO_INSIDE = "wing_to_inside"
    WING_TO_WING = "wing_to_wing"
    WING_TO_BACK = "wing_to_back"


_PAIR_TO_MOVEMENT = {
    (Zone.INSIDE, Zone.INSIDE): MovementType.INSIDE_TO_INSIDE,
    (Zone.INSIDE, Zone.WING): MovementType.INSIDE_TO_WING,
    (Zone.INSIDE, Zone.BACK): MovementType.INSIDE_TO_BACK,
    (Zone.WING, Zone.INSIDE): MovementType.WING_TO_INSIDE,
    (Zone.WING, Zone.WING): MovementType.WING_TO_WING,
    (Zone.WING, Zone.BACK): MovementType.WING_TO_BACK,
}


def movement_type_for(origin: Zone, destination: Zone) -> MovementType | None:
    """None means the pair is not one of the six profiled movements."""
    return _PAIR_TO_MOVEMENT.get((origin, destination))


class InsufficientDefendersError(ValueError):
    def __init__(self, count: int, needed: int = 3):
        self.count = count
        super().__init__(f"need >= {needed} visible outfield defenders, got {count}")


@dataclass(frozen=True)
class DynamicLines:
    """Three depth-line x coordinates, sorted: first < middle < last, where
    'last' is nearest the defended (+x) goal."""

    first_x: float
    middle_x: float
    last_x: float
    memberships: Mapping[str, int]  # player_id -> 0 (first) | 1 | 2 (last)

    @property
    def xs(self) -> tuple[float, float, float]:
        return (self.first_x, self.middle_x, self.last_x)


@dataclass(frozen=True)
class TeamBlock:
    """Convex hull over outfield defenders, CCW vertex order."""

    vertices: tuple[tuple[float, float], ...]

    def contains(self, x: float, y: float) -> bool:
        return point_in_convex((x, y), self.vertices)


def fit_lines(defender_xs: Mapping[str, float], back_line_mode: str = "centroid") -> DynamicLines:
    """Cluster defender depth coordinates into the three dynamic lines.

    back_line_mode 'deepest' moves the last line onto the deepest defender
    instead of the cluster centroid, so a single trailing defender widens the
    Back zone boundary.
    """
    if len(defender_xs) < 3:
        raise InsufficientDefendersError(len(defender_xs))
    ids = list(defender_xs.keys())
    xs = np.array([defender_xs[i] for i in ids], dtype=np.float64)
    km = DepthKMeans(n_clusters=3).fit(xs)
    first, middle, last = (float(c) for c in km.cluster_centers_)
    if back_line_mode == "deepest":
        last = float(xs.max())
    elif back_line_mode != "centroid":
        raise ValueError(f"unknown back_line_mode {back_line_mode!r}")
    memberships = {pid: int(lbl) for pid, lbl in zip(ids, km.labels_)}
    return DynamicLines(first, middle, last, memberships)


def build_block(defenders: Sequence[tuple[float, float]]) -> TeamBlock:
    if len(defenders) < 3:
        raise InsufficientDefendersError(len(defenders))
    try:
        hull = convex_hull(defenders)
    except DegenerateGeometryError as e:
        raise InsufficientDefendersError(len(defenders)) from e
    return TeamBlock(tuple(hull))


def classify_zone(point: tuple[float, float], lines: DynamicLines, block: TeamBlock) -> Zone:
    """Total over the pitch: back beyond the last line, front before the first,
    inside when the block contains the point, wing otherwise."""
    x, y = point
    if x > lines.last_x:
        return Zone.BACK
    if x < lines.first_x:
        return Zone.FRONT
    if block.contains(x, y):
        return Zone.INSIDE
    return Zone.WING


@dataclass(frozen=True)
class RunClassification:
    movement: MovementType | None
    origin_zone: Zone | None
    destination_zone: Zone | None
    reason: str | None  # set when unclassified


def classify_run(
    run: RunEffort,
    geometry_at: "callable",
    normalize_point: "callable" = None,
) -> RunClassification:
    """Classify one run against the defending block.

    geometry_at(t_ms) -> (DynamicLines, TeamBlock) or raises
    InsufficientDefendersError / LookupError; normalize_point maps raw pitch
    points into the same normalized coordinates the geometry uses.
    """
    if normalize_point is None:
        normalize_point = lambda p: p
    try:
        lines_o, block_o = geometry_at(run.t_valley_end)
        lines_d, block_d = geometry_at(run.t_peak_end)
    except InsufficientDefendersError as e:
        return RunClassification(None, None, None, f"defender visibility: {e}")
    except LookupError as e:
        return RunClassification(None, None, None, f"no frame near key moment: {e}")
    origin = classify_zone(normalize_point(run.origin), lines_o, block_o)
    dest = classify_zone(normalize_point(run.destination), lines_d, block_d)
    movement = movement_type_for(origin, dest)
    if movement is None:
        return RunClassification(
            None, origin, dest, f"unprofiled pair {origin.value}->{dest.value}"
        )
    return RunClassification(movement, origin, dest, None)

from __future__ import annotations

import numpy as np
import pytest

from runcontext.kinematics import RunEffort
from runcontext.tactical import (
    InsufficientDefendersError,
    MovementType,
    Zone,
    build_block,
    classify_run,
    classify_zone,
    fit_lines,
    movement_type_for,
)


def lines_for(xs):
    return fit_lines({f"d{i}": x for i, x in enumerate(xs)})


def block_of(points):
    return build_block(points)


def back_four_block():
    """Defenders of the +x goal: back line ~85, mid ~70, front ~55."""
    pts = [
        (55, 20), (55, 48),
        (70, 12), (70, 30), (70, 38), (70, 56),
        (85, 18), (85, 30), (85, 38), (85, 50),
    ]
    lines = lines_for([p[0] for p in pts])
    return lines, block_of(pts), pts


class TestFitLines:
    def test_three_separated_pairs(self):
        lines = lines_for([10, 11, 25, 26, 40, 41])
        assert abs(lines.first_x - 10.5) < 1e-9
        assert abs(lines.middle_x - 25.5) < 1e-9
        assert abs(lines.last_x - 40.5) < 1e-9

    def test_coincident_defenders(self):
        lines = lines_for([30.0] * 6)
        assert lines.xs == (30.0, 30.0, 30.0)

    def test_memberships_cover_all(self):
        lines = lines_for([10, 11, 25, 26, 40, 41])
        assert set(lines.memberships.values()) == {0, 1, 2}

    def test_too_few(self):
        with pytest.raises(InsufficientDefendersError):
            fit_lines({"a": 1.0, "b": 2.0})

    def test_deepest_defender_mode(self):
        xs = {"a": 10.0, "b": 11.0, "c": 25.0, "d": 26.0, "e": 40.0, "f": 47.0}
        centroid = fit_lines(xs)
        deepest = fit_lines(xs, back_line_mode="deepest")
        assert centroid.last_x == pytest.approx(43.5)
        assert deepest.last_x == 47.0
        assert deepest.first_x == centroid.first_x
        with pytest.raises(ValueError):
            fit_lines(xs, back_line_mode="nonsense")


class TestBuildBlock:
    def test_square_hull(self):
        block = block_of([(0, 0), (10, 0), (10, 10), (0, 10), (5, 5)])
        assert len(block.vertices) == 4
        assert block.contains(5, 5)

    def test_collinear_rejected(self):
        with pytest.raises(InsufficientDefendersError):
            block_of([(0, 0), (5, 5), (10, 10)])

    def test_triangle(self):
        block = block_of([(0, 0), (10, 0), (5, 8)])
        assert len(block.vertices) == 3


class TestClassifyZone:
    def test_behind_last_line_is_back(self):
        lines, block, _ = back_four_block()
        assert classify_zone((lines.last_x + 5.0, 34.0), lines, block) is Zone.BACK

    def test_hull_centroid_is_inside(self):
        lines, block, pts = back_four_block()
        cx = float(np.mean([p[0] for p in pts]))
        cy = float(np.mean([p[1] for p in pts]))
        assert lines.first_x < cx < lines.last_x
        assert classify_zone((cx, cy), lines, block) is Zone.INSIDE

    def test_touchline_point_is_wing(self):
        lines, block, _ = back_four_block()
        assert classify_zone((70.0, 1.0), lines, block) is Zone.WING

    def test_before_first_line_is_front(self):
        lines, block, _ = back_four_block()
        assert classify_zone((40.0, 34.0), lines, block) is Zone.FRONT

    def test_grid_partition_total(self):
        lines, block, _ = back_four_block()
        for x in range(0, 106):
            for y in range(0, 69):
                z = classify_zone((float(x), float(y)), lines, block)
                assert isinstance(z, Zone)

    def test_y_mirror_invariance(self):
        lines, block, pts = back_four_block()
        mirrored = block_of([(x, 68.0 - y) for x, y in pts])
        rng = np.random.default_rng(3)
        for _ in range(300):
            x = float(rng.uniform(0, 105))
            y = float(rng.uniform(0, 68))
            assert classify_zone((x, y), lines, block) == classify_zone(
                (x, 68.0 - y), lines, mirrored
            )


class TestMovementTypes:
    def test_six_profiled_pairs(self):
        assert movement_type_for(Zone.INSIDE, Zone.BACK) is MovementType.INSIDE_TO_BACK
        assert movement_type_for(Zone.WING, Zone.WING) is MovementType.WING_TO_WING
        assert movement_type_for(Zone.FRONT, Zone.BACK) is None
        assert movement_type_for(Zone.BACK, Zone.INSIDE) is None
        assert len(MovementType) == 6


def make_run(origin, destination):
    return RunEffort(
        player_id="p",
        t_valley_end=1000,
        t_peak_start=1500,
        t_peak_end=2500,
        t_next_valley_start=3000,
        origin=origin,
        destination=destination,
        peak_speed=23.0,
        distance_total=20.0,
        distance_hi=12.0,
        is_hi=True,
    )


class TestClassifyRun:
    def _geometry(self):
        lines, block, _ = back_four_block()
        return lambda t_ms: (lines, block)

    def test_inside_to_back(self):
        run = make_run((70.0, 34.0), (92.0, 34.0))
        cls = classify_run(run, self._geometry())
        assert cls.movement is MovementType.INSIDE_TO_BACK
        assert cls.origin_zone is Zone.INSIDE
        assert cls.destination_zone is Zone.BACK

    def test_wing_fixed_point(self):
        run = make_run((70.0, 2.0), (70.0, 2.0))
        cls = classify_run(run, self._geometry())
        assert cls.movement is MovementType.WING_TO_WING

    def test_front_origin_unclassified(self):
        run = make_run((30.0, 34.0), (70.0, 34.0))
        cls = classify_run(run, self._geometry())
        assert cls.movement is None
        assert cls.origin_zone is Zone.FRONT
        assert "front" in cls.reason

    def test_missing_defenders_unclassified(self):
        def bad_geometry(t_ms):
            raise InsufficientDefendersError(2)

        cls = classify_run(make_run((70.0, 34.0), (92.0, 34.0)), bad_geometry)
        assert cls.movement is None
        assert "visibility" in cls.reason

    def test_point_normalizer_applied(self):
        # raw coordinates for a team attacking -x; reflection hits the same zones
        run = make_run((105.0 - 70.0, 68.0 - 34.0), (105.0 - 92.0, 68.0 - 34.0))
        cls = classify_run(
            run, self._geometry(), normalize_point=lambda p: (105.0 - p[0], 68.0 - p[1])
        )
        assert cls.movement is MovementType.INSIDE_TO_BACK

from __future__ import annotations

import math

import numpy as np
import pytest

from runcontext.geometry import (
    DegenerateGeometryError,
    area_fraction_beyond_x,
    clip_halfplane_x,
    convex_hull,
    point_in_convex,
    polygon_area,
)


def halfplane_oracle(point, hull, tol=1e-9) -> bool:
    """All-edges half-plane test on a CCW polygon (independent of the
    wedge-search implementation under test)."""
    n = len(hull)
    px, py = point
    for i in range(n):
        ax, ay = hull[i]
        bx, by = hull[(i + 1) % n]
        cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        if cross < -tol:
            return False
    return True


class TestConvexHull:
    def test_square_with_center(self):
        pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)]
        hull = convex_hull(pts)
        assert len(hull) == 4
        assert point_in_convex((0.5, 0.5), hull)

    def test_triangle_is_own_hull(self):
        pts = [(0, 0), (4, 0), (2, 3)]
        hull = convex_hull(pts)
        assert sorted(hull) == sorted(pts)

    def test_ccw_orientation(self):
        hull = convex_hull([(0, 0), (2, 0), (2, 2), (0, 2)])
        assert polygon_area(hull) > 0

    def test_collinear_rejected(self):
        with pytest.raises(DegenerateGeometryError):
            convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])

    def test_too_few_rejected(self):
        with pytest.raises(DegenerateGeometryError):
            convex_hull([(0, 0), (1, 1)])

    def test_random_points_all_contained(self, rng):
        for _ in range(50):
            pts = rng.uniform(0, 50, size=(10, 2))
            hull = convex_hull([tuple(p) for p in pts])
            for p in pts:
                assert halfplane_oracle(tuple(p), hull)

    def test_area_translation_rotation_invariant(self, rng):
        pts = rng.uniform(0, 30, size=(12, 2))
        hull = convex_hull([tuple(p) for p in pts])
        base = abs(polygon_area(hull))
        theta = 0.7
        rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        moved = pts @ rot.T + np.array([13.0, -7.0])
        hull2 = convex_hull([tuple(p) for p in moved])
        assert abs(abs(polygon_area(hull2)) - base) < 1e-9 * max(base, 1.0)


class TestPointInConvex:
    def test_agrees_with_halfplane_oracle_bulk(self, rng):
        """10,000 random point/hull pairs, zero disagreements."""
        disagreements = 0
        for _ in range(100):
            pts = rng.uniform(0, 40, size=(rng.integers(3, 25), 2))
            try:
                hull = convex_hull([tuple(p) for p in pts])
            except DegenerateGeometryError:
                continue
            queries = rng.uniform(-5, 45, size=(100, 2))
            for q in queries:
                if point_in_convex(tuple(q), hull) != halfplane_oracle(tuple(q), hull):
                    disagreements += 1
        assert disagreements == 0

    def test_boundary_counts_as_inside(self):
        hull = convex_hull([(0, 0), (4, 0), (4, 4), (0, 4)])
        assert point_in_convex((0, 2), hull)
        assert point_in_convex((4, 4), hull)


class TestClip:
    def test_half_square(self):
        square = [(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]
        left = clip_halfplane_x(square, 2.0, keep_leq=True)
        assert abs(abs(polygon_area(left)) - 8.0) < 1e-12

    def test_fraction_beyond(self):
        square = [(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]
        assert abs(area_fraction_beyond_x(square, 1.0) - 0.75) < 1e-12
        assert area_fraction_beyond_x(square, 5.0) == 0.0
        assert abs(area_fraction_beyond_x(square, -1.0) - 1.0) < 1e-12

    def test_fraction_matches_shapely(self, rng):
        shapely = pytest.importorskip("shapely.geometry")
        for _ in range(40):
            pts = rng.uniform(0, 30, size=(10, 2))
            hull = convex_hull([tuple(p) for p in pts])
            poly = shapely.Polygon(hull)
            cut = float(rng.uniform(0, 30))
            box = shapely.box(cut, -100, 1000, 100)
            expected = poly.intersection(box).area / poly.area
            assert abs(area_fraction_beyond_x(hull, cut) - expected) < 1e-9

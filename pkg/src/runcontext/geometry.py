"""Planar geometry primitives: hulls, containment, areas, half-plane clips.

Vertices are plain (x, y) float tuples; hulls are counter-clockwise with
collinear interior points dropped. Everything here is allocation-light on
purpose — the defense classifier calls it once per frame.
"""
from __future__ import annotations

from typing import Sequence

Point = tuple[float, float]

EPS = 1e-9


class DegenerateGeometryError(ValueError):
    """Fewer than 3 points, or all points collinear."""


def _cross(o: Point, a: Point, b: Point) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Point]) -> list[Point]:
    """Andrew's monotone chain; returns CCW vertices, strict turns only."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) < 3:
        raise DegenerateGeometryError(f"need >= 3 distinct points, got {len(pts)}")
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateGeometryError("all points collinear")
    return hull


def polygon_area(vertices: Sequence[Point]) -> float:
    """Shoelace area; positive for CCW rings."""
    n = len(vertices)
    s = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def polygon_centroid(vertices: Sequence[Point]) -> Point:
    a = polygon_area(vertices)
    if abs(a) < EPS:
        xs = [v[0] for v in vertices]
        ys = [v[1] for v in vertices]
        return (sum(xs) / len(xs), sum(ys) / len(ys))
    cx = cy = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        w = x0 * y1 - x1 * y0
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    return (cx / (6.0 * a), cy / (6.0 * a))


def point_in_convex(point: Point, hull: Sequence[Point], tol: float = EPS) -> bool:
    """Containment test for a CCW convex polygon, boundary counts as inside.

    Locates the angular wedge around hull[0] by binary search, then does a
    single orientation test against the far edge — O(log h) instead of the
    all-edges scan.
    """
    n = len(hull)
    if n < 3:
        raise DegenerateGeometryError("hull must have >= 3 vertices")
    p = (float(point[0]), float(point[1]))
    v0 = hull[0]
    # outside the fan spanned by (v0->v1 .. v0->v[n-1])?
    if _cross(v0, hull[1], p) < -tol or _cross(v0, hull[n - 1], p) > tol:
        return False
    lo, hi = 1, n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _cross(v0, hull[mid], p) >= 0.0:
            lo = mid
        else:
            hi = mid
    return _cross(hull[lo], hull[lo + 1], p) >= -tol


def clip_halfplane_x(vertices: Sequence[Point], x_cut: float, keep_leq: bool) -> list[Point]:
    """Sutherland-Hodgman clip of a polygon against the vertical line x = x_cut."""

    def inside(v: Point) -> bool:
        return v[0] <= x_cut if keep_leq else v[0] >= x_cut

    def intersect(a: Point, b: Point) -> Point:
        t = (x_cut - a[0]) / (b[0] - a[0])
        return (x_cut, a[1] + t * (b[1] - a[1]))

    out: list[Point] = []
    n = len(vertices)
    for i in range(n):
        cur, nxt = vertices[i], vertices[(i + 1) % n]
        cur_in, nxt_in = inside(cur), inside(nxt)
        if cur_in:
            out.append(cur)
            if not nxt_in:
                out.append(intersect(cur, nxt))
        elif nxt_in:
            out.append(intersect(cur, nxt))
    return out


def area_fraction_beyond_x(vertices: Sequence[Point], x_cut: float) -> float:
    """Share of polygon area lying at x >= x_cut."""
    total = abs(polygon_area(vertices))
    if total < EPS:
        return 0.0
    clipped = clip_halfplane_x(vertices, x_cut, keep_leq=False)
    if len(clipped) < 3:
        return 0.0
    return abs(polygon_area(clipped)) / total


def hull_fraction_beyond_x(points: Sequence[Point], x_cut: float) -> float | None:
    """Hull + clip + area ratio fused for the per-frame hot path.

    Returns None when the hull is degenerate (fewer than 3 points or all
    collinear). Semantically identical to
    area_fraction_beyond_x(convex_hull(points), x_cut).
    """
    pts = sorted(set(points))
    if len(pts) < 3:
        return None
    lower: list[Point] = []
    ap = lower.append
    pop = lower.pop
    for p in pts:
        px, py = p
        while len(lower) >= 2:
            ox, oy = lower[-2]
            ax, ay = lower[-1]
            if (ax - ox) * (py - oy) - (ay - oy) * (px - ox) <= 0.0:
                pop()
            else:
                break
        ap(p)
    upper: list[Point] = []
    ap = upper.append
    pop = upper.pop
    for p in reversed(pts):
        px, py = p
        while len(upper) >= 2:
            ox, oy = upper[-2]
            ax, ay = upper[-1]
            if (ax - ox) * (py - oy) - (ay - oy) * (px - ox) <= 0.0:
                pop()
            else:
                break
        ap(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return None
    total = polygon_area(hull)
    if abs(total) < EPS:
        return None
    clipped = clip_halfplane_x(hull, x_cut, keep_leq=False)
    if len(clipped) < 3:
        return 0.0
    return abs(polygon_area(clipped)) / abs(total)

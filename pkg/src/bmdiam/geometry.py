"""Exact planar geometry for finite point sets.

Convex hull (monotone chain over an octagon prefilter), hull diameter by
rotating calipers, perimeter, area, and the directional range function
(projection width).  All computations are double precision with pinned
primitives: every point-pair distance anywhere in the package is
sqrt(dx*dx + dy*dy), so independently computed quantities compare exactly.

Degenerate hulls (one or two vertices) are ordinary values: a discrete
path can collapse to a point or a segment and the functionals must still
be defined.  A two-vertex hull is a segment whose closed boundary is
traversed twice, hence perimeter 2 * length and area 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels


class Point2(NamedTuple):
    """A point of the plane."""

    x: float
    y: float


def _as_xy(points) -> tuple[np.ndarray, np.ndarray]:
    """Coerce a point sequence (Point2, pairs, or (n,2) array) to arrays."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1 and arr.shape[0] == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise ValueError("expected a nonempty sequence of planar points")
    if not np.isfinite(arr).all():
        raise ValueError("point coordinates must be finite")
    return np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])


def _cross(o: Point2, a: Point2, b: Point2) -> float:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon, vertices counter-clockwise, no duplicates.

    With three or more vertices every consecutive triple must make a
    strict left turn; collinear points are not vertices.
    """

    vertices: tuple[Point2, ...]

    def __post_init__(self):
        m = len(self.vertices)
        if m == 0:
            raise ValueError("polygon needs at least one vertex")
        for p in self.vertices:
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise ValueError("vertex coordinates must be finite")
        if m == 2 and self.vertices[0] == self.vertices[1]:
            raise ValueError("duplicate vertices")
        if m >= 3:
            for i in range(m):
                o = self.vertices[i]
                a = self.vertices[(i + 1) % m]
                b = self.vertices[(i + 2) % m]
                if _cross(o, a, b) <= 0.0:
                    raise ValueError("vertices must make strict left turns (CCW)")

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        xs = np.array([p.x for p in self.vertices], dtype=np.float64)
        ys = np.array([p.y for p in self.vertices], dtype=np.float64)
        return xs, ys


@dataclass(frozen=True)
class HullStats:
    """Per-path functional bundle.

    diameter, perimeter and area refer to the convex hull; range_x and
    range_y are the projection widths onto the two axes, computed from the
    raw points (the hull attains the same values).
    """

    diameter: float
    perimeter: float
    area: float
    range_x: float
    range_y: float


def _strictly_convex_cycle(pts: list[Point2]) -> list[Point2]:
    """Drop vertices that fail the strict-left-turn test under rounding.

    The chain guarantees convexity only for the triples it evaluates while
    building; a triple spanning the seam of the two half-chains can round
    to a zero cross product.  Such a vertex is collinear to working
    precision and is removed, one per sweep so a long near-degenerate run
    collapses to its endpoints instead of vanishing.
    """
    while len(pts) >= 3:
        m = len(pts)
        for i in range(m):
            if _cross(pts[i], pts[(i + 1) % m], pts[(i + 2) % m]) <= 0.0:
                del pts[(i + 1) % m]
                break
        else:
            break
    if len(pts) >= 2:
        k = min(range(len(pts)), key=lambda i: pts[i])
        pts = pts[k:] + pts[:k]
    return pts


def convex_hull(points: Sequence[Point2]) -> ConvexPolygon:
    """Smallest convex polygon containing the input points.

    Output vertices are a subset of the input points, counter-clockwise,
    starting from the lexicographically smallest vertex.  Interior points,
    and boundary points collinear to working precision, are dropped.
    """
    xs, ys = _as_xy(points)
    idx = _kernels.hull_indices_xy(xs, ys)
    cycle = [Point2(float(xs[i]), float(ys[i])) for i in idx]
    return ConvexPolygon(tuple(_strictly_convex_cycle(cycle)))


def diameter(poly: ConvexPolygon) -> float:
    """Largest vertex-pair distance, via rotating calipers.

    Agrees exactly (same floating-point value) with the brute-force scan
    over all vertex pairs; 0 for a single vertex.
    """
    xs, ys = poly.as_arrays()
    d, _, _ = _kernels.hull_metrics(xs, ys)
    return float(d)


def perimeter(poly: ConvexPolygon) -> float:
    """Boundary length: edge sum, 2 * length for a segment, 0 for a point."""
    xs, ys = poly.as_arrays()
    _, p, _ = _kernels.hull_metrics(xs, ys)
    return float(p)


def area(poly: ConvexPolygon) -> float:
    """Enclosed area by the shoelace formula; 0 for fewer than 3 vertices."""
    xs, ys = poly.as_arrays()
    _, _, a = _kernels.hull_metrics(xs, ys)
    return float(a)


def directional_range(points, theta: float) -> float:
    """Width of the projection onto the direction (cos theta, sin theta).

    max minus min of p . e_theta over the points.  Nonnegative; never
    exceeds the diameter of the point set.
    """
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    xs, ys = _as_xy(points)
    c = math.cos(theta)
    s = math.sin(theta)
    proj = c * xs + s * ys
    return float(proj.max() - proj.min())


def range_sup_over_grid(points, grid_count: int) -> float:
    """Largest directional range over theta = k*pi/grid_count, k < grid_count.

    Contract: the result lies in [diameter * cos(pi/(2*grid_count)), diameter],
    because some grid direction is within pi/(2*grid_count) of the direction
    realizing the diameter.
    """
    if grid_count < 2:
        raise ValueError("grid_count must be at least 2")
    xs, ys = _as_xy(points)
    thetas = np.arange(grid_count, dtype=np.float64) * (math.pi / grid_count)
    cs = np.cos(thetas)
    sn = np.sin(thetas)
    return float(_kernels.range_grid(xs, ys, cs, sn))

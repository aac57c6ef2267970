"""Hull functionals against brute-force oracles and analytic cases."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bmdiam import (
    ConvexPolygon,
    Point2,
    area,
    convex_hull,
    diameter,
    directional_range,
    perimeter,
    range_sup_over_grid,
)

from conftest import disc_cloud, mixed_cloud

SQUARE = [Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)]


# ---------------------------------------------------------------------------
# brute-force oracles


def brute_hull_cycle(xs, ys):
    """O(n^3) facet enumeration; assumes points in generic position.

    A directed edge (i, j) is a hull facet iff every other point lies
    strictly to its left.  Returns the vertex cycle starting from the
    lexicographic minimum.
    """
    n = xs.shape[0]
    succ = {}
    for i in range(n):
        dx = xs - xs[i]
        dy = ys - ys[i]
        cross = dx[:, None] * dy[None, :] - dy[:, None] * dx[None, :]
        for j in range(n):
            if j == i:
                continue
            row = np.delete(cross[j], [i, j])
            if row.size == 0 or row.min() > 0.0:
                succ[i] = j
    start = min(succ, key=lambda i: (xs[i], ys[i]))
    cycle = [start]
    cur = succ[start]
    while cur != start:
        cycle.append(cur)
        cur = succ[cur]
    return cycle


def brute_pairwise_max(xs, ys):
    dx = xs[:, None] - xs[None, :]
    dy = ys[:, None] - ys[None, :]
    return float(np.sqrt(dx * dx + dy * dy).max())


def edge_sum_oracle(poly):
    vs = poly.vertices
    if len(vs) == 1:
        return 0.0
    if len(vs) == 2:
        return 2.0 * math.dist(vs[0], vs[1])
    return sum(math.dist(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))


def fan_area_oracle(poly):
    vs = poly.vertices
    if len(vs) < 3:
        return 0.0
    o = vs[0]
    total = 0.0
    for a, b in zip(vs[1:], vs[2:]):
        total += (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    return 0.5 * total


# ---------------------------------------------------------------------------
# analytic cases


def test_hull_of_single_point():
    poly = convex_hull([Point2(0.0, 0.0)])
    assert poly.vertices == (Point2(0.0, 0.0),)
    assert diameter(poly) == 0.0
    assert perimeter(poly) == 0.0
    assert area(poly) == 0.0


def test_hull_of_square_drops_interior_point():
    poly = convex_hull([SQUARE[2], SQUARE[0], Point2(0.5, 0.5), SQUARE[3], SQUARE[1]])
    assert set(poly.vertices) == set(SQUARE)
    assert len(poly.vertices) == 4


def test_square_metrics():
    poly = convex_hull(SQUARE)
    assert diameter(poly) == math.sqrt(2.0)
    assert perimeter(poly) == 4.0
    assert area(poly) == 1.0


def test_segment_metrics():
    poly = convex_hull([Point2(0, 0), Point2(3, 4)])
    assert diameter(poly) == 5.0
    assert perimeter(poly) == 10.0
    assert area(poly) == 0.0


def test_collinear_triple_collapses_to_segment():
    poly = convex_hull([Point2(0, 0), Point2(1, 1), Point2(2, 2)])
    assert len(poly.vertices) == 2
    assert area(poly) == 0.0


def test_directional_range_cases():
    seg = [Point2(0, 0), Point2(1, 0)]
    assert directional_range(seg, 0.0) == 1.0
    assert directional_range(seg, math.pi / 2) == pytest.approx(0.0, abs=1e-16)
    assert directional_range(SQUARE, math.pi / 4) == pytest.approx(math.sqrt(2.0))


def test_range_sup_grid_cases():
    assert range_sup_over_grid([Point2(1.0, 2.0)], 24) == 0.0
    seg = [Point2(0, 0), Point2(1, 0)]
    r = range_sup_over_grid(seg, 180)
    assert math.cos(math.pi / 360.0) <= r <= 1.0


def test_input_validation():
    with pytest.raises(ValueError):
        convex_hull([])
    with pytest.raises(ValueError):
        convex_hull([Point2(0.0, math.nan)])
    with pytest.raises(ValueError):
        directional_range([Point2(0, 0)], math.inf)
    with pytest.raises(ValueError):
        range_sup_over_grid([Point2(0, 0)], 1)
    with pytest.raises(ValueError):
        ConvexPolygon(())
    with pytest.raises(ValueError):
        ConvexPolygon((Point2(1, 1), Point2(1, 1)))
    with pytest.raises(ValueError):  # clockwise
        ConvexPolygon(tuple(reversed(SQUARE)))
    with pytest.raises(ValueError):  # collinear triple is not strictly convex
        ConvexPolygon((Point2(0, 0), Point2(1, 0), Point2(2, 0)))


# ---------------------------------------------------------------------------
# oracle comparisons


def test_hull_matches_facet_enumeration_on_disc(rng):
    xs, ys = disc_cloud(rng, 1000)
    poly = convex_hull(np.column_stack([xs, ys]))
    cycle = brute_hull_cycle(xs, ys)
    want = [(xs[i], ys[i]) for i in cycle]
    got = [(p.x, p.y) for p in poly.vertices]
    assert got == want


def test_caliper_diameter_equals_brute_exactly(rng):
    for trial in range(40):
        xs, ys = mixed_cloud(rng, trial + 4000)
        poly = convex_hull(np.column_stack([xs, ys]))
        hx, hy = poly.as_arrays()
        d = diameter(poly)
        assert d == brute_pairwise_max(hx, hy)
        assert d == brute_pairwise_max(xs, ys)


def test_500_point_hulls_brute_diameter(rng):
    for _ in range(10):
        xs, ys = disc_cloud(rng, 500, radius=float(rng.uniform(0.1, 50.0)))
        poly = convex_hull(np.column_stack([xs, ys]))
        hx, hy = poly.as_arrays()
        assert diameter(poly) == brute_pairwise_max(hx, hy)


def test_perimeter_matches_edge_sum_oracle(rng):
    for trial in range(30):
        xs, ys = mixed_cloud(rng, trial + 5000)
        poly = convex_hull(np.column_stack([xs, ys]))
        want = edge_sum_oracle(poly)
        assert perimeter(poly) == pytest.approx(want, rel=1e-12, abs=1e-300)


def test_area_matches_fan_oracle(rng):
    for trial in range(30):
        xs, ys = mixed_cloud(rng, trial + 6000)
        poly = convex_hull(np.column_stack([xs, ys]))
        want = fan_area_oracle(poly)
        assert area(poly) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_range_sup_near_diameter_on_fine_grid(rng):
    for _ in range(200):
        n = int(rng.integers(2, 60))
        xs, ys = disc_cloud(rng, n)
        pts = np.column_stack([xs, ys])
        d = diameter(convex_hull(pts))
        r = range_sup_over_grid(pts, 3600)
        assert d * math.cos(math.pi / 7200.0) <= r <= d * (1.0 + 1e-13)
        assert r == pytest.approx(d, rel=1e-6)


def test_directional_range_attains_diameter_along_its_pair(rng):
    for trial in range(25):
        xs, ys = mixed_cloud(rng, trial + 7000)
        pts = np.column_stack([xs, ys])
        d = diameter(convex_hull(pts))
        if d == 0.0:
            continue
        dx = xs[:, None] - xs[None, :]
        dy = ys[:, None] - ys[None, :]
        i, j = np.unravel_index(np.argmax(dx * dx + dy * dy), dx.shape)
        theta = math.atan2(ys[j] - ys[i], xs[j] - xs[i])
        assert directional_range(pts, theta) == pytest.approx(d, rel=1e-12)


def test_rotation_invariance_of_diameter(rng):
    for trial in range(25):
        xs, ys = mixed_cloud(rng, trial + 8000)
        d0 = diameter(convex_hull(np.column_stack([xs, ys])))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        c, s = math.cos(phi), math.sin(phi)
        rx = c * xs - s * ys
        ry = s * xs + c * ys
        d1 = diameter(convex_hull(np.column_stack([rx, ry])))
        assert d1 == pytest.approx(d0, rel=1e-12, abs=1e-300)


# ---------------------------------------------------------------------------
# property-based checks; adversarial coordinates get a tiny relative guard
# on inequalities that hold exactly in real arithmetic

coords = st.floats(
    min_value=-1.0e6,
    max_value=1.0e6,
    allow_nan=False,
    allow_infinity=False,
    allow_subnormal=False,
    width=64,
)
point_lists = st.lists(st.tuples(coords, coords), min_size=1, max_size=50)


def _guard(pts):
    scale = max(1.0, max(abs(x) for x, _ in pts), max(abs(y) for _, y in pts))
    return 1e-12 * scale


@settings(max_examples=250, deadline=None)
@given(point_lists)
def test_hull_vertices_are_input_points(pts):
    poly = convex_hull(pts)
    inputs = {(float(x), float(y)) for x, y in pts}
    assert all((v.x, v.y) in inputs for v in poly.vertices)


@settings(max_examples=250, deadline=None)
@given(point_lists)
def test_sandwich_inequalities(pts):
    poly = convex_hull(pts)
    if len({(x, y) for x, y in pts}) < 2:
        return
    d = diameter(poly)
    l = perimeter(poly)
    eps = _guard(pts)
    assert 2.0 * d <= l + eps
    assert l <= math.pi * d + eps


@settings(max_examples=250, deadline=None)
@given(point_lists)
def test_axis_range_bounds(pts):
    poly = convex_hull(pts)
    d = diameter(poly)
    r0 = directional_range(pts, 0.0)
    r90 = directional_range(pts, math.pi / 2)
    eps = _guard(pts)
    assert max(r0, r90) <= d + eps
    assert d <= math.sqrt(r0 * r0 + r90 * r90) + eps


@settings(max_examples=150, deadline=None)
@given(point_lists, st.floats(min_value=0.0, max_value=math.pi))
def test_directional_range_never_exceeds_diameter(pts, theta):
    d = diameter(convex_hull(pts))
    assert directional_range(pts, theta) <= d + _guard(pts)


@settings(max_examples=150, deadline=None)
@given(point_lists, st.integers(min_value=2, max_value=720))
def test_grid_sup_contract(pts, grid):
    d = diameter(convex_hull(pts))
    r = range_sup_over_grid(pts, grid)
    eps = _guard(pts)
    assert d * math.cos(math.pi / (2.0 * grid)) - eps <= r <= d + eps

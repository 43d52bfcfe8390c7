import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from circle_trellis.geometry import (
    ArcPolygon,
    Circle,
    GeometryError,
    Point,
    ToleranceConfig,
    arc_polygon,
    arc_polygon_area,
    circumference_intersections,
    distance_matrix,
    lens_area,
    lens_area_batch,
    triple_area,
    triple_area_batch,
)
from circle_trellis.oracles import raster_area_table

LENS_D1 = 2 * math.pi / 3 - math.sqrt(3) / 2
REULEAUX = (math.pi - math.sqrt(3)) / 2


def test_circle_validation():
    with pytest.raises(GeometryError):
        Circle(1, 0, 0, 0.0)
    with pytest.raises(GeometryError):
        Circle(1, 0, float("nan"), 1.0)
    with pytest.raises(GeometryError):
        Circle(0, 0, 0, 1.0)


def test_distance_matrix():
    d = distance_matrix([Circle(1, 0, 0, 1), Circle(2, 3, 4, 1)])
    assert d[0, 1] == pytest.approx(5.0) and d[1, 0] == pytest.approx(5.0)
    assert distance_matrix([Circle(1, 2, 2, 1)]).shape == (1, 1)
    d3 = distance_matrix([Circle(i + 1, float(i), 0, 1) for i in range(3)])
    assert d3[0, 2] == pytest.approx(2.0)
    assert np.allclose(np.diag(d3), 0.0) and np.allclose(d3, d3.T)


def test_circumference_intersections():
    a, b = Circle(1, 0, 0, 1), Circle(2, 1, 0, 1)
    pts = sorted(circumference_intersections(a, b), key=lambda p: p.y)
    assert pts[0].x == pytest.approx(0.5) and pts[0].y == pytest.approx(-math.sqrt(3) / 2)
    assert pts[1].y == pytest.approx(math.sqrt(3) / 2)
    assert circumference_intersections(a, Circle(2, 3, 0, 1)) == []
    tangent = circumference_intersections(a, Circle(2, 2, 0, 1))
    assert len(tangent) == 1 and tangent[0].x == pytest.approx(1.0)
    inner = circumference_intersections(a, Circle(2, 0.5, 0, 0.5))
    assert len(inner) == 1 and inner[0].x == pytest.approx(1.0)
    assert circumference_intersections(a, Circle(2, 0, 0, 0.5)) == []
    with pytest.raises(GeometryError, match="degenerate duplicate circle"):
        circumference_intersections(a, Circle(2, 0, 0, 1))


def test_lens_area_cases():
    a = Circle(1, 0, 0, 1)
    assert lens_area(a, Circle(2, 0, 0, 1)) == pytest.approx(math.pi)
    assert lens_area(a, Circle(2, 2, 0, 1)) == 0.0
    assert lens_area(a, Circle(2, 2.5, 0, 1)) == 0.0
    assert lens_area(a, Circle(2, 1, 0, 1)) == pytest.approx(LENS_D1, rel=1e-12)
    assert lens_area(a, Circle(2, 0.2, 0.1, 0.3)) == pytest.approx(math.pi * 0.09)


def test_triple_area_cases():
    u = [Circle(i + 1, 0, 0, 1) for i in range(3)]
    # identical disks are allowed at this level: only the engine rejects duplicates
    assert triple_area(*u) == pytest.approx(math.pi)
    empty = [Circle(1, 0, 0, 1.2), Circle(2, 2, 0, 1.2), Circle(3, 1, 2, 1.2)]
    assert triple_area(*empty) == 0.0
    eq = [Circle(1, 0, 0, 1), Circle(2, 1, 0, 1), Circle(3, 0.5, math.sqrt(3) / 2, 1)]
    assert triple_area(*eq) == pytest.approx(REULEAUX, rel=1e-12)
    # lens inside a third circle
    lens_in = [Circle(1, 0, 0, 1), Circle(2, 1, 0, 1), Circle(3, 0.5, 0, 2)]
    assert triple_area(*lens_in) == pytest.approx(LENS_D1, rel=1e-12)
    # small circle inside both others
    small = [Circle(1, 0, 0, 1), Circle(2, 0.5, 0, 1), Circle(3, 0.25, 0, 0.2)]
    assert triple_area(*small) == pytest.approx(math.pi * 0.04)


def test_arc_polygon_area_matches_direct():
    lens = arc_polygon([Circle(1, 0, 0, 1), Circle(2, 1, 0, 1)])
    assert len(lens.vertices) == 2
    assert arc_polygon_area(lens) == pytest.approx(LENS_D1, rel=1e-12)
    eq = arc_polygon([Circle(1, 0, 0, 1), Circle(2, 1, 0, 1),
                      Circle(3, 0.5, math.sqrt(3) / 2, 1)])
    assert arc_polygon_area(eq) == pytest.approx(REULEAUX, rel=1e-12)
    single = ArcPolygon([Point(0, 0)], [])
    assert arc_polygon_area(single) == 0.0


def test_arc_polygon_rejects_nonconvex_order():
    eq = arc_polygon([Circle(1, 0, 0, 1), Circle(2, 1, 0, 1),
                      Circle(3, 0.5, math.sqrt(3) / 2, 1)])
    v = list(eq.vertices)
    bad = ArcPolygon([v[0], v[2], v[1]], list(eq.arcs))
    with pytest.raises(GeometryError, match="non-convex"):
        arc_polygon_area(bad)


def test_tolerance_defaults():
    cs = [Circle(1, 0, 0, 2.0), Circle(2, 1, 0, 0.5)]
    assert ToleranceConfig().eps(cs) == pytest.approx(2e-9)
    with pytest.raises(ValueError):
        ToleranceConfig(area_rel_tol=0.0)


circle_st = st.builds(
    lambda x, y, r: (x, y, r),
    st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.1, 0.6),
)


def _mk(params):
    return [Circle(i + 1, *p) for i, p in enumerate(params)]


@settings(max_examples=200, deadline=None)
@given(st.lists(circle_st, min_size=3, max_size=3))
def test_triple_properties(params):
    cs = _mk(params)
    t = triple_area(*cs)
    for perm in ([1, 0, 2], [2, 1, 0], [1, 2, 0]):
        assert triple_area(*[cs[i] for i in perm]) == pytest.approx(t, abs=1e-12)
    lenses = [lens_area(cs[i], cs[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
    assert 0.0 <= t <= min(lenses) + 1e-12
    assert lens_area(cs[0], cs[1]) == pytest.approx(lens_area(cs[1], cs[0]), abs=1e-15)
    assert lens_area(cs[0], cs[1]) <= min(cs[0].area, cs[1].area) + 1e-15


@settings(max_examples=100, deadline=None)
@given(st.lists(circle_st, min_size=3, max_size=3),
       st.floats(0, 2 * math.pi), st.floats(-5, 5), st.floats(-5, 5), st.floats(0.2, 5.0))
def test_rigid_motion_and_scaling(params, theta, tx, ty, s):
    cs = _mk(params)
    c, si = math.cos(theta), math.sin(theta)
    moved = [Circle(k.id, c * k.cx - si * k.cy + tx, si * k.cx + c * k.cy + ty, k.r) for k in cs]
    scaled = [Circle(k.id, s * k.cx, s * k.cy, s * k.r) for k in cs]
    base = triple_area(*cs)
    assert triple_area(*moved) == pytest.approx(base, rel=1e-8, abs=1e-11)
    assert triple_area(*scaled) == pytest.approx(s * s * base, rel=1e-8, abs=1e-11)
    assert lens_area(*moved[:2]) == pytest.approx(lens_area(*cs[:2]), rel=1e-8, abs=1e-11)


def test_batch_matches_scalar(rng):
    pts = rng.uniform(0, 1, (300, 3, 2))
    r = rng.uniform(0.1, 0.6, (300, 3))
    tri = triple_area_batch(pts[..., 0], pts[..., 1], r)
    lens = lens_area_batch(pts[:, 0, 0], pts[:, 0, 1], r[:, 0], pts[:, 1, 0], pts[:, 1, 1], r[:, 1])
    for k in range(300):
        cs = [Circle(i + 1, pts[k, i, 0], pts[k, i, 1], r[k, i]) for i in range(3)]
        assert tri[k] == pytest.approx(triple_area(*cs), abs=1e-11)
        assert lens[k] == pytest.approx(lens_area(cs[0], cs[1]), abs=1e-12)


def test_random_pairs_and_triples_match_raster(rng):
    # 1000 random pairs/triples against the scanline oracle
    worst = 0.0
    for k in range(1000):
        n = 2 + k % 2
        cs = [Circle(i + 1, *rng.uniform(0, 1, 2), rng.uniform(0.1, 0.6)) for i in range(n)]
        ras = raster_area_table(cs, 2e-3)
        full = (1 << n) - 1
        exact = lens_area(*cs) if n == 2 else triple_area(*cs)
        err = abs(exact - ras.nonexclusive(full))
        assert err <= ras.error_bound
        worst = max(worst, err / ras.error_bound)
    assert worst < 0.1

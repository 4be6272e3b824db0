import math

import numpy as np
import pytest

from barricade.domain import PolygonalDomain
from barricade.geodesic import (GeodesicTree, ShortestPathMap,
                                SimplePolygonGeodesics, geodesic_convexity_probe,
                                triangulate)
from barricade.geometry import Point, dist, orientation, point_in_ring, ring_area
from barricade.instances import random_simple_ring
from barricade.visibility import Environment, _adj_from, dijkstra


def tri_area_sum(ring, tris):
    s = 0.0
    for (i, j, k) in tris:
        a, b, c = ring[i], ring[j], ring[k]
        s += 0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    return s


def test_triangulate_convex_quad():
    quad = [(0, 0), (2, 0), (2, 1), (0, 1)]
    tris = triangulate(quad)
    assert len(tris) == 2
    assert tri_area_sum(quad, tris) == pytest.approx(2.0)


def test_triangulate_unit_square_area():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert tri_area_sum(sq, triangulate(sq)) == pytest.approx(1.0)


def test_triangulate_random_20gon_count():
    ring = random_simple_ring(20, seed=5)
    tris = triangulate(ring)
    assert len(tris) == 18
    assert tri_area_sum(ring, tris) == pytest.approx(ring_area(ring))


def test_triangulate_rejects_tiny():
    with pytest.raises(ValueError):
        triangulate([(0, 0), (1, 0)])


def random_interior_points(ring, count, rng):
    xs = [p[0] for p in ring]
    ys = [p[1] for p in ring]
    out = []
    while len(out) < count:
        p = (rng.uniform(min(xs), max(xs)), rng.uniform(min(ys), max(ys)))
        if point_in_ring(p, ring) > 0:
            out.append(Point(*p))
    return out


def vis_graph_length(ring, p, q):
    """Independent oracle: Dijkstra over the visibility graph of the polygon."""
    d = PolygonalDomain.bare(ring)
    env = Environment(d)
    vg = env.graph(extra_points=[p, q])
    nodes = vg.nodes
    dd, _ = dijkstra(len(nodes), _adj_from(vg), nodes.index(p))
    return dd[nodes.index(q)]


def test_straight_shot_in_square():
    geo = SimplePolygonGeodesics([(0, 0), (1, 0), (1, 1), (0, 1)])
    gp = geo.shortest_path((0.1, 0.1), (0.9, 0.9))
    assert gp.points == [Point(0.1, 0.1), Point(0.9, 0.9)]
    assert gp.length == pytest.approx(math.sqrt(1.28))


def test_single_reflex_bend():
    # U-shape: path from one arm to the other must bend at the reflex corner.
    ring = [(0, 0), (5, 0), (5, 4), (3.5, 4), (3.5, 1.5), (1.5, 1.5), (1.5, 4), (0, 4)]
    geo = SimplePolygonGeodesics(ring)
    p, q = Point(0.7, 3.5), Point(4.3, 3.5)
    gp = geo.shortest_path(p, q)
    assert gp.points[0] == p and gp.points[-1] == q
    assert Point(1.5, 1.5) in gp.points and Point(3.5, 1.5) in gp.points
    assert gp.length == pytest.approx(vis_graph_length(ring, p, q), abs=1e-9)


def test_funnel_matches_visibility_oracle_random():
    rng = np.random.default_rng(42)
    for trial in range(12):
        n = int(rng.integers(6, 30))
        ring = random_simple_ring(n, seed=100 + trial)
        geo = SimplePolygonGeodesics(ring)
        pts = random_interior_points(ring, 8, rng)
        for k in range(0, 8, 2):
            p, q = pts[k], pts[k + 1]
            got = geo.shortest_path(p, q).length
            want = vis_graph_length(ring, p, q)
            assert got == pytest.approx(want, abs=1e-9), (trial, p, q)


def test_funnel_boundary_endpoints():
    rng = np.random.default_rng(3)
    ring = random_simple_ring(14, seed=9)
    geo = SimplePolygonGeodesics(ring)
    # Vertex-to-vertex geodesics agree with the oracle too.
    for i in range(0, 14, 3):
        for j in range(1, 14, 4):
            if i == j:
                continue
            p, q = ring[i], ring[j]
            got = geo.shortest_path(p, q).length
            want = vis_graph_length(ring, p, q)
            assert got == pytest.approx(want, abs=1e-9), (i, j)


def test_path_bends_are_pulled_taut():
    rng = np.random.default_rng(17)
    ring = random_simple_ring(24, seed=12)
    geo = SimplePolygonGeodesics(ring)
    pts = random_interior_points(ring, 10, rng)
    for k in range(0, 10, 2):
        gp = geo.shortest_path(pts[k], pts[k + 1])
        for m in range(1, len(gp.points) - 1):
            assert gp.points[m] in ring  # bends only at polygon vertices
            assert orientation(gp.points[m - 1], gp.points[m], gp.points[m + 1]) != 0


def test_spm_convex_single_cell():
    ring = [(0, 0), (4, 0), (4, 3), (0, 3)]
    geo = SimplePolygonGeodesics(ring)
    spm = geo.spm((1.0, 1.0))
    assert len(spm.cells) == 1
    assert spm.cells[0].root == Point(1.0, 1.0)
    assert spm.evaluate((3.5, 2.5)) == pytest.approx(dist((1, 1), (3.5, 2.5)))


def test_spm_one_reflex_vertex_two_cells():
    ring = [(0, 0), (6, 0), (6, 4), (3, 4), (3, 2), (0, 2)]
    geo = SimplePolygonGeodesics(ring)
    src = Point(1.0, 1.0)
    spm = geo.spm(src)
    assert len(spm.cells) == 2
    roots = sorted(set(c.root for c in spm.cells))
    assert Point(3.0, 2.0) in roots and src in roots


def test_spm_evaluate_matches_direct_geodesic():
    rng = np.random.default_rng(23)
    for trial in range(6):
        ring = random_simple_ring(int(rng.integers(8, 22)), seed=300 + trial)
        geo = SimplePolygonGeodesics(ring)
        src = random_interior_points(ring, 1, rng)[0]
        spm = geo.spm(src)
        for p in random_interior_points(ring, 25, rng):
            direct = geo.shortest_path(src, p).length
            assert spm.evaluate(p) == pytest.approx(direct, abs=1e-9), (trial, p)


def test_spm_windows_do_not_cross():
    from barricade.geometry import segments_cross
    rng = np.random.default_rng(5)
    for trial in range(5):
        ring = random_simple_ring(18, seed=500 + trial)
        geo = SimplePolygonGeodesics(ring)
        src = random_interior_points(ring, 1, rng)[0]
        spm = geo.spm(src)
        for i in range(len(spm.windows)):
            for j in range(i + 1, len(spm.windows)):
                a, b = spm.windows[i].seg
                c, d = spm.windows[j].seg
                assert not segments_cross(a, b, c, d)


def test_convexity_probe_convex_polygon():
    ring = [(0, 0), (4, 0), (5, 2), (3, 4), (0, 3)]
    geo = SimplePolygonGeodesics(ring)
    rng = np.random.default_rng(2)
    pts = random_interior_points(ring, 9, rng)
    for k in range(0, 9, 3):
        v = geodesic_convexity_probe(geo, pts[k], pts[k + 1], pts[k + 2])
        assert v <= 1e-12


def test_convexity_probe_degenerate():
    ring = [(0, 0), (4, 0), (4, 4), (0, 4)]
    geo = SimplePolygonGeodesics(ring)
    assert geodesic_convexity_probe(geo, (1, 1), (2, 2), (2, 2)) == 0.0


def test_convexity_probe_random():
    rng = np.random.default_rng(8)
    worst = 0.0
    for trial in range(10):
        ring = random_simple_ring(int(rng.integers(8, 20)), seed=800 + trial)
        geo = SimplePolygonGeodesics(ring)
        pts = random_interior_points(ring, 9, rng)
        for k in range(0, 9, 3):
            worst = max(worst, geodesic_convexity_probe(geo, pts[k], pts[k + 1], pts[k + 2], samples=12))
    assert worst <= 1e-9

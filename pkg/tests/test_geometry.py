import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barricade.geometry import (Point, circle_circle_intersections,
                                circle_segment_intersections, common_tangents,
                                dist, dist_chain_chain, dist_point_chain,
                                dist_point_segment, dist_segment_segment, is_ccw,
                                offset_chain, on_segment, orientation,
                                point_in_ring, ring_area, ring_is_simple,
                                segments_cross, segments_intersect,
                                splinegon_area, splinegon_length,
                                tangent_points_from_point)


def test_orientation_basic():
    assert orientation((0, 0), (1, 0), (0, 1)) == 1
    assert orientation((0, 0), (1, 0), (2, 0)) == 0
    assert orientation((0, 0), (0, 1), (1, 0)) == -1


def test_orientation_near_degenerate_exact():
    # Points nearly collinear: the exact fallback must still give a stable sign.
    a = (0.0, 0.0)
    b = (1e-30, 1e-30)
    c = (2e-30, 2e-30)
    assert orientation(a, b, c) == 0
    c2 = (2e-30, 2.0000000000000004e-30)
    assert orientation(a, b, c2) in (-1, 0, 1)
    assert orientation(a, b, c2) == -orientation(a, c2, b)


coords = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


@given(st.tuples(coords, coords), st.tuples(coords, coords), st.tuples(coords, coords))
@settings(max_examples=300, deadline=None)
def test_orientation_antisymmetric(p, q, r):
    assert orientation(p, q, r) == -orientation(p, r, q)
    assert orientation(p, q, r) == orientation(q, r, p)


def test_segment_predicates():
    assert segments_cross((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_cross((0, 0), (1, 1), (1, 1), (2, 0))
    assert segments_intersect((0, 0), (1, 1), (1, 1), (2, 0))
    assert on_segment((1, 1), (0, 0), (2, 2))
    assert not on_segment((1, 1.0000001), (0, 0), (2, 2))


def test_distance_witnesses():
    d, w = dist_point_segment((0, 1), (-1, 0), (1, 0))
    assert d == pytest.approx(1.0)
    assert w == Point(0.0, 0.0)
    d, w = dist_point_segment((2, 0), (-1, 0), (1, 0))
    assert d == pytest.approx(1.0)
    assert w == Point(1.0, 0.0)
    d, w = dist_point_chain((3, 4), [(0, 0), (0, 1), (1, 1)])
    assert d == pytest.approx(math.sqrt(13))
    assert w == Point(1.0, 1.0)


def test_dist_point_chain_triangle_inequality():
    rng = np.random.default_rng(7)
    for _ in range(200):
        chain = [tuple(q) for q in rng.uniform(-5, 5, size=(4, 2))]
        p = tuple(rng.uniform(-5, 5, size=2))
        d, w = dist_point_chain(p, chain)
        # Witness realizes the distance, and no sampled chain point does better.
        assert d == pytest.approx(dist(p, w))
        for lam in np.linspace(0, 1, 9):
            for i in range(3):
                q = (chain[i][0] * (1 - lam) + chain[i + 1][0] * lam,
                     chain[i][1] * (1 - lam) + chain[i + 1][1] * lam)
                assert d <= dist(p, q) + 1e-12


def test_dist_segment_segment():
    d, w1, w2 = dist_segment_segment((0, 0), (1, 0), (0, 1), (1, 1))
    assert d == pytest.approx(1.0)
    d, _, _ = dist_segment_segment((0, 0), (1, 1), (1, 0), (0, 1))
    assert d == 0.0
    d, w1, w2 = dist_chain_chain([(0, 0), (2, 0)], [(0, 3), (2, 3), (2, 1)])
    assert d == pytest.approx(1.0)
    assert w1 == Point(2.0, 0.0)
    assert w2 == Point(2.0, 1.0)


def test_ring_helpers():
    sq = [(0, 0), (2, 0), (2, 2), (0, 2)]
    assert ring_is_simple(sq)
    assert is_ccw(sq)
    assert ring_area(sq) == pytest.approx(4.0)
    assert point_in_ring((1, 1), sq) == 1
    assert point_in_ring((2, 1), sq) == 0
    assert point_in_ring((3, 1), sq) == -1
    bow = [(0, 0), (2, 2), (2, 0), (0, 2)]
    assert not ring_is_simple(bow)


def test_circle_intersections():
    ts = circle_segment_intersections((0, 0), 1.0, (-2, 0), (2, 0))
    assert [pytest.approx(v) for v in ts] == [0.25, 0.75]
    pts = circle_circle_intersections((0, 0), 1.0, (1, 0), 1.0)
    assert len(pts) == 2
    for p in pts:
        assert dist(p, (0, 0)) == pytest.approx(1.0)
        assert dist(p, (1, 0)) == pytest.approx(1.0)


def test_tangents():
    tp = tangent_points_from_point((2, 0), (0, 0), 1.0)
    assert len(tp) == 2
    for p in tp:
        assert dist(p, (0, 0)) == pytest.approx(1.0)
        # Tangent line is perpendicular to the radius at the contact point.
        assert abs((p[0] - 2) * p[0] + p[1] * p[1]) < 1e-12
    tt = common_tangents((0, 0), 1.0, (5, 0), 1.0)
    assert len(tt) == 4
    for (p1, p2) in tt:
        assert dist(p1, (0, 0)) == pytest.approx(1.0)
        assert dist(p2, (5, 0)) == pytest.approx(1.0)


def _raster_offset_area(chain, r, grid=2048):
    xs = [p[0] for p in chain]
    ys = [p[1] for p in chain]
    x0, x1 = min(xs) - r - 0.1, max(xs) + r + 0.1
    y0, y1 = min(ys) - r - 0.1, max(ys) + r + 0.1
    gx = np.linspace(x0, x1, grid)
    gy = np.linspace(y0, y1, grid)
    X, Y = np.meshgrid(gx, gy)
    dmin = np.full(X.shape, np.inf)
    if len(chain) == 1:
        dmin = np.hypot(X - chain[0][0], Y - chain[0][1])
    for a, b in zip(chain[:-1], chain[1:]):
        ax, ay = a
        bx, by = b
        vx, vy = bx - ax, by - ay
        L2 = vx * vx + vy * vy
        t = ((X - ax) * vx + (Y - ay) * vy) / L2
        t = np.clip(t, 0.0, 1.0)
        d = np.hypot(X - (ax + t * vx), Y - (ay + t * vy))
        dmin = np.minimum(dmin, d)
    cell = (gx[1] - gx[0]) * (gy[1] - gy[0])
    return float((dmin <= r).sum() * cell)


def test_offset_point_is_circle():
    loops = offset_chain([(1.0, 2.0)], 1.0)
    assert len(loops) == 1
    assert len(loops[0]) == 1
    arc = loops[0][0]
    assert arc.kind == "arc"
    assert splinegon_area(loops[0]) == pytest.approx(math.pi, rel=1e-9)
    assert splinegon_length(loops[0]) == pytest.approx(2 * math.pi, rel=1e-9)


def test_offset_segment_is_stadium():
    loops = offset_chain([(0.0, 0.0), (2.0, 0.0)], 1.0)
    assert len(loops) == 1
    loop = loops[0]
    kinds = sorted(p.kind for p in loop)
    assert kinds == ["arc", "arc", "seg", "seg"]
    # Stadium: area = 2*2*1 + pi, perimeter = 2*2 + 2*pi.
    assert splinegon_area(loop) == pytest.approx(4 + math.pi, rel=1e-9)
    assert splinegon_length(loop) == pytest.approx(4 + 2 * math.pi, rel=1e-9)
    for piece in loop:
        if piece.kind == "arc":
            assert piece.span > 0  # CCW, region on the left


def test_offset_lshape_area_matches_raster():
    chain = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0)]
    r = 0.5
    loops = offset_chain(chain, r)
    area = sum(splinegon_area(l) for l in loops)
    want = _raster_offset_area(chain, r)
    assert area == pytest.approx(want, rel=2e-3)
    # Exact union area: two 2x1 rectangles minus their r^2/... overlap, two end
    # half-caps, and the exposed corner contribution (quarter disk net).
    analytic = 2 * (2 * 2 * r) - r * r + 1.25 * math.pi * r * r
    assert area == pytest.approx(analytic, rel=1e-9)


def test_offset_area_monotone_in_radius():
    rng = np.random.default_rng(3)
    chain = [(0, 0), (1.5, 0.4), (2.2, 1.8), (1.0, 2.4), (0.3, 1.2)]
    r_small, r_big = 0.3, 0.45
    a_small = sum(splinegon_area(l) for l in offset_chain(chain, r_small))
    a_big = sum(splinegon_area(l) for l in offset_chain(chain, r_big))
    assert a_big > a_small
    assert a_small == pytest.approx(_raster_offset_area(chain, r_small), rel=5e-3)
    assert a_big == pytest.approx(_raster_offset_area(chain, r_big), rel=5e-3)


def test_offset_random_chains_match_raster():
    rng = np.random.default_rng(11)
    for trial in range(6):
        pts = rng.uniform(0, 4, size=(4, 2))
        chain = [tuple(p) for p in pts]
        r = rng.uniform(0.2, 0.8)
        loops = offset_chain(chain, r)
        assert loops, "offset produced no loops"
        area = sum(splinegon_area(l) for l in loops)
        want = _raster_offset_area(chain, r, grid=1200)
        assert area == pytest.approx(want, rel=1.5e-2), f"trial {trial}"


def test_offset_c_shape_has_inner_pocket():
    # A chain that nearly closes traps a free pocket: one CCW outer loop and
    # one CW inner loop.
    chain = [(0, 0), (3, 0), (3, 3), (0, 3), (0, 0.7)]
    loops = offset_chain(chain, 0.4)
    areas = sorted(splinegon_area(l) for l in loops)
    assert len(loops) == 2
    assert areas[0] < 0 < areas[1]

"""Deterministic instance generators: random simple polygons (with optional
holes) and the reduction gadgets used as stress fixtures.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .domain import PolygonalDomain, ToleranceConfig, validate_domain
from .geometry import (Point, dist, dist_point_segment, is_ccw, orientation,
                       point_in_ring, ring_is_simple, segments_intersect)


def _uncross(pts: List[Tuple[float, float]], rng) -> Optional[List[Tuple[float, float]]]:
    """Turn a random tour into a simple polygon by 2-opt uncrossing."""
    n = len(pts)
    order = list(rng.permutation(n))
    for _ in range(40 * n * n):
        ring = [pts[k] for k in order]
        bad = None
        for i in range(n):
            a, b = ring[i], ring[(i + 1) % n]
            for j in range(i + 1, n):
                if (j == i + 1) or (i == 0 and j == n - 1):
                    continue
                c, d = ring[j], ring[(j + 1) % n]
                if segments_intersect(a, b, c, d):
                    bad = (i, j)
                    break
            if bad:
                break
        if bad is None:
            return ring
        i, j = bad
        order[i + 1:j + 1] = reversed(order[i + 1:j + 1])
    return None


def _quality_ok(ring: List[Tuple[float, float]], min_feature: float) -> bool:
    n = len(ring)
    for i in range(n):
        p = ring[i]
        for j in range(n):
            if j == i or (j + 1) % n == i:
                continue
            d, _ = dist_point_segment(p, ring[j], ring[(j + 1) % n])
            if d < 0.22 * min_feature:
                return False
    return True


def _poisson_points(n: int, scale: float, r_min: float, rng) -> Optional[List[Tuple[float, float]]]:
    pts: List[Tuple[float, float]] = []
    for _ in range(200 * n):
        p = tuple(rng.uniform(0.0, scale, size=2))
        if all(dist(p, q) >= r_min for q in pts):
            pts.append(p)
            if len(pts) == n:
                return pts
    return None


def random_simple_ring(n: int, seed: int, scale: float = 10.0) -> List[Point]:
    """Random simple CCW polygon with n vertices and no sliver features."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = np.random.default_rng(seed)
    min_feature = 0.38 * scale / math.sqrt(n)
    for _ in range(300):
        pts = _poisson_points(n, scale, min_feature, rng)
        if pts is None:
            continue
        ring = _uncross(pts, rng)
        if ring is None:
            continue
        if not is_ccw(ring):
            ring = ring[::-1]
        if not ring_is_simple(ring):
            continue
        if not _quality_ok(ring, min_feature):
            continue
        return [Point(*p) for p in ring]
    raise RuntimeError(f"failed to generate a clean simple polygon (n={n}, seed={seed})")


def _farthest_edge_pair(ring: Sequence[Point], min_len: float) -> Tuple[int, int]:
    n = len(ring)
    mids = []
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if dist(a, b) >= min_len:
            mids.append((i, Point((a.x + b.x) / 2, (a.y + b.y) / 2)))
    best = (-1.0, 0, 1)
    for k1 in range(len(mids)):
        for k2 in range(k1 + 1, len(mids)):
            d = dist(mids[k1][1], mids[k2][1])
            if d > best[0]:
                best = (d, mids[k1][0], mids[k2][0])
    return best[1], best[2]


def gen_random_simple(n: int, seed: int, scale: float = 10.0,
                      eps_gap: Optional[float] = None,
                      tol: ToleranceConfig = ToleranceConfig()) -> PolygonalDomain:
    """Random path-mode simple polygon; s and t sit on the two most distant edges."""
    ring = random_simple_ring(n, seed, scale)
    e1, e2 = _farthest_edge_pair(ring, 0.08 * scale)
    m = len(ring)
    s = Point((ring[e1].x + ring[(e1 + 1) % m].x) / 2, (ring[e1].y + ring[(e1 + 1) % m].y) / 2)
    t = Point((ring[e2].x + ring[(e2 + 1) % m].x) / 2, (ring[e2].y + ring[(e2 + 1) % m].y) / 2)
    d = PolygonalDomain.path(ring, s=s, t=t, eps_gap=eps_gap, tol=tol)
    bad = validate_domain(d)
    if bad:
        raise RuntimeError(f"generated domain invalid: {bad}")
    return d


def _convex_blob(center: Point, radius: float, k: int, rng) -> List[Point]:
    angles = np.sort(rng.uniform(0.0, 2 * math.pi, size=k))
    radii = rng.uniform(0.55 * radius, radius, size=k)
    ring = [Point(center.x + r * math.cos(a), center.y + r * math.sin(a))
            for a, r in zip(angles, radii)]
    return ring[::-1]  # holes are clockwise


def gen_random_with_holes(n: int, holes: int, seed: int, scale: float = 10.0,
                          eps_gap: Optional[float] = None,
                          tol: ToleranceConfig = ToleranceConfig()) -> PolygonalDomain:
    """Random path-mode domain with the requested number of convex holes."""
    rng = np.random.default_rng(seed + 77_000)
    for attempt in range(200):
        base = gen_random_simple(n, seed + 1000 * attempt, scale, eps_gap, tol)
        ring = base.orig_outer
        clearance = 0.05 * scale
        placed: List[List[Point]] = []
        tries = 0
        while len(placed) < holes and tries < 600:
            tries += 1
            c = Point(*rng.uniform(0.15 * scale, 0.85 * scale, size=2))
            r = rng.uniform(0.05 * scale, 0.11 * scale)
            blob = _convex_blob(c, r, int(rng.integers(4, 7)), rng)
            if any(point_in_ring(p, ring) <= 0 for p in blob):
                continue
            ok = True
            for p in blob:
                m = len(ring)
                for j in range(m):
                    d, _ = dist_point_segment(p, ring[j], ring[(j + 1) % m])
                    if d < clearance:
                        ok = False
                        break
                if not ok:
                    break
            for q in (base.s, base.t):
                if ok and point_in_ring(q, blob) >= 0:
                    ok = False
            for other in placed:
                if not ok:
                    break
                dmin = min(dist(a, b) for a in blob for b in other)
                if dmin < clearance or point_in_ring(blob[0], other) >= 0 \
                        or point_in_ring(other[0], blob) >= 0:
                    ok = False
            if not ok:
                continue
            cand = PolygonalDomain.path(ring, s=base.s, t=base.t,
                                        holes=placed + [blob], eps_gap=eps_gap, tol=tol)
            if validate_domain(cand):
                continue
            placed.append(blob)
        if len(placed) == holes:
            d = PolygonalDomain.path(ring, s=base.s, t=base.t, holes=placed,
                                     eps_gap=eps_gap, tol=tol)
            if not validate_domain(d):
                return d
    raise RuntimeError(f"failed to generate domain with {holes} holes (seed={seed})")


# ---------------------------------------------------------------------------
# hardness gadgets (flow): width-B channels between source and sink

def _channel_domain(widths: List[float], channel_len: float = 8.0,
                    wall_thickness: float = 0.5,
                    tol: ToleranceConfig = ToleranceConfig()) -> PolygonalDomain:
    """Stacked horizontal channels of the given widths, separated by slab holes.

    Source is the left outer edge, sink the right one; the min cut crosses one
    slab gap per channel.
    """
    m = len(widths)
    total_h = sum(widths) + (m - 1) * wall_thickness
    W = channel_len
    outer = [Point(0.0, 0.0), Point(W, 0.0), Point(W, total_h), Point(0.0, total_h)]
    # CCW edges: 0 bottom, 1 right, 2 top, 3 left.
    holes: List[List[Point]] = []
    y = 0.0
    margin = 0.04 * W
    for k in range(m - 1):
        y += widths[k]
        slab = [Point(margin, y), Point(W - margin, y),
                Point(W - margin, y + wall_thickness), Point(margin, y + wall_thickness)]
        holes.append(slab[::-1])  # clockwise
        y += wall_thickness
    return PolygonalDomain.flow(outer, source_edge=3, sink_edge=1, holes=holes, tol=tol)


def gen_flow_3partition(a: Sequence[int], B: int,
                        tol: ToleranceConfig = ToleranceConfig()) -> Tuple[PolygonalDomain, List[float]]:
    """Flow instance whose full blockage encodes partitioning `a` into B-sum groups."""
    a = list(a)
    if B <= 0 or sum(a) % B != 0:
        raise ValueError("requires sum(a) divisible by B")
    m = sum(a) // B
    if m < 1:
        raise ValueError("need at least one channel")
    d = _channel_domain([float(B)] * m, tol=tol)
    return d, [float(x) for x in a]


def gen_flow_2partition(a: Sequence[int],
                        tol: ToleranceConfig = ToleranceConfig()) -> Tuple[PolygonalDomain, List[float]]:
    """Two half-sum channels: full blockage iff `a` admits a 2-partition."""
    a = list(a)
    if sum(a) % 2 != 0:
        raise ValueError("sum(a) must be even")
    B = sum(a) // 2
    d = _channel_domain([float(B)] * 2, tol=tol)
    return d, [float(x) for x in a]

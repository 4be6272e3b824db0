"""Polygonal domains with marked entry/exit.

Flow mode marks a source edge S and a sink edge T on the outer ring; the two
boundary chains between them are the bottom B and top T of the domain.

Path mode marks two boundary points s and t. Each is realized as a small gap
of width eps_gap: the gap endpoints (s-, s+ and t-, t+) are inserted as real
ring vertices, the chains B and T run between the gaps, and barriers may not
seal a gap by lying along its edge (the door rule).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .geometry import (Point, Segment, dist, dist_point_segment, is_ccw,
                       on_segment, orientation, point_in_ring, pt,
                       ring_is_simple, segments_intersect,
                       segments_overlap_collinear)


@dataclass(frozen=True)
class ToleranceConfig:
    eps_geom: float = 1e-9          # relative geometric tolerance
    eps_objective: float = 1e-6     # objective comparison tolerance
    angular_margin_delta: float = 1e-4  # radians; excludes gap-collinear placements

    def __post_init__(self):
        if self.eps_geom <= 0 or self.eps_objective <= 0 or self.angular_margin_delta <= 0:
            raise ValueError("tolerances must be strictly positive")


@dataclass(frozen=True)
class GapSite:
    """One realized gap (door) on the outer boundary."""
    center: Point          # the marked point (s or t)
    minus_idx: int         # ring index of the gap endpoint on the B side
    plus_idx: int          # ring index of the gap endpoint on the T side
    edge_b_end: Point      # far endpoint of the host edge on the B side
    edge_t_end: Point      # far endpoint of the host edge on the T side

    def line_dir_to_t(self) -> Tuple[float, float]:
        """Unit direction along the host edge, from the B side toward the T side."""
        dx = self.edge_t_end.x - self.edge_b_end.x
        dy = self.edge_t_end.y - self.edge_b_end.y
        n = math.hypot(dx, dy)
        return dx / n, dy / n


class PolygonalDomain:
    """Immutable polygonal domain; construct via .path() or .flow()."""

    def __init__(self, ring: List[Point], holes: List[List[Point]], mode: str,
                 tol: ToleranceConfig, *,
                 source_edge: Optional[int] = None, sink_edge: Optional[int] = None,
                 s_idx: Optional[int] = None, t_idx: Optional[int] = None,
                 gap_s: Optional[GapSite] = None, gap_t: Optional[GapSite] = None,
                 eps_gap: Optional[float] = None, orig_outer: Optional[List[Point]] = None):
        self.ring = ring
        self.holes = holes
        self.mode = mode
        self.tol = tol
        self.source_edge = source_edge
        self.sink_edge = sink_edge
        self.s_idx = s_idx
        self.t_idx = t_idx
        self.gap_s = gap_s
        self.gap_t = gap_t
        self.eps_gap = eps_gap
        self.orig_outer = orig_outer if orig_outer is not None else list(ring)
        self._chains()

    # -- construction -----------------------------------------------------

    @classmethod
    def path(cls, outer: Sequence, s, t, holes: Sequence = (),
             eps_gap: Optional[float] = None,
             tol: ToleranceConfig = ToleranceConfig()) -> "PolygonalDomain":
        outer = [pt(p) for p in outer]
        holes = [[pt(p) for p in h] for h in holes]
        s, t = pt(s), pt(t)
        if eps_gap is None:
            eps_gap = 1e-6 * _diameter(outer)
        ring, s_idx, t_idx, gap_s, gap_t = _insert_gaps(outer, s, t, eps_gap)
        return cls(ring, holes, "path", tol, s_idx=s_idx, t_idx=t_idx,
                   gap_s=gap_s, gap_t=gap_t, eps_gap=eps_gap, orig_outer=outer)

    @classmethod
    def flow(cls, outer: Sequence, source_edge: int, sink_edge: int,
             holes: Sequence = (),
             tol: ToleranceConfig = ToleranceConfig()) -> "PolygonalDomain":
        outer = [pt(p) for p in outer]
        holes = [[pt(p) for p in h] for h in holes]
        return cls(list(outer), holes, "flow", tol,
                   source_edge=source_edge, sink_edge=sink_edge, orig_outer=outer)

    @classmethod
    def bare(cls, outer: Sequence, holes: Sequence = (),
             tol: ToleranceConfig = ToleranceConfig()) -> "PolygonalDomain":
        """Domain with no marked entry/exit (visibility and geometry only)."""
        outer = [pt(p) for p in outer]
        holes = [[pt(p) for p in h] for h in holes]
        return cls(list(outer), holes, "bare", tol, orig_outer=outer)

    # -- derived structure -------------------------------------------------

    def _chains(self):
        n = len(self.ring)
        if self.mode == "path":
            sm = self.gap_s.minus_idx
            tm = self.gap_t.minus_idx
            tp = self.gap_t.plus_idx
            sp = self.gap_s.plus_idx
            self.bottom_idx = _walk(sm, tm, n)
            self.top_idx = _walk(tp, sp, n)
        elif self.mode == "flow":
            i, j = self.source_edge, self.sink_edge
            self.bottom_idx = _walk((i + 1) % n, j, n)
            self.top_idx = _walk((j + 1) % n, i, n)
        else:
            self.bottom_idx = []
            self.top_idx = []

    def bottom_chain(self) -> List[Point]:
        return [self.ring[i] for i in self.bottom_idx]

    def top_chain(self) -> List[Point]:
        return [self.ring[i] for i in self.top_idx]

    def chain(self, side: str) -> List[Point]:
        return self.bottom_chain() if side == "bottom" else self.top_chain()

    def chain_idx(self, side: str) -> List[int]:
        return self.bottom_idx if side == "bottom" else self.top_idx

    @property
    def s(self) -> Point:
        return self.ring[self.s_idx]

    @property
    def t(self) -> Point:
        return self.ring[self.t_idx]

    def diameter(self) -> float:
        return _diameter(self.ring)

    def obstacle_edges(self) -> List[Tuple[Point, Point]]:
        out = _ring_edges(self.ring)
        for h in self.holes:
            out.extend(_ring_edges(h))
        return out

    def contains(self, p, boundary_tol: float = 0.0) -> int:
        """+1 inside free space, 0 on an obstacle boundary, -1 outside/in a hole.

        With boundary_tol > 0, points within that distance of any obstacle
        edge count as boundary (robust for midpoints of along-edge segments).
        """
        if boundary_tol > 0.0 and self._near_boundary(p, boundary_tol):
            return 0
        side = point_in_ring(p, self.ring)
        if side < 0:
            return -1
        if side == 0:
            return 0
        for h in self.holes:
            hs = point_in_ring(p, h)
            if hs > 0:
                return -1
            if hs == 0:
                return 0
        return 1

    def _near_boundary(self, p, tol: float) -> bool:
        for a, b in self.obstacle_edges():
            d, _ = dist_point_segment(p, a, b)
            if d <= tol:
                return True
        return False

    # -- door rule ----------------------------------------------------------

    def gap_sites(self) -> List[GapSite]:
        if self.mode != "path":
            return []
        return [self.gap_s, self.gap_t]

    def sticks_shut_door(self, sticks: Sequence[Segment]) -> bool:
        """True iff the sticks (with the holes) seal a gap along its host edge.

        Forbidden per the model: a connected chain of sticks/holes touching the
        host edge both below the gap and above it.
        """
        for gap in self.gap_sites():
            minus = self.ring[gap.minus_idx]
            plus = self.ring[gap.plus_idx]
            anchor_b = (minus, gap.edge_b_end)
            anchor_t = (gap.edge_t_end, plus)
            objs: List[object] = list(sticks) + list(self.holes)
            nb = len(objs)
            touches_b = [_touches(o, anchor_b) for o in objs]
            touches_t = [_touches(o, anchor_t) for o in objs]
            adj = [[False] * nb for _ in range(nb)]
            for i in range(nb):
                for j in range(i + 1, nb):
                    if _objects_meet(objs[i], objs[j]):
                        adj[i][j] = adj[j][i] = True
            # BFS from B-touching objects to any T-touching object.
            stack = [i for i in range(nb) if touches_b[i]]
            seen = set(stack)
            while stack:
                i = stack.pop()
                if touches_t[i]:
                    return True
                for j in range(nb):
                    if adj[i][j] and j not in seen:
                        seen.add(j)
                        stack.append(j)
        return False

    def stick_in_gap_margin(self, stick: Segment) -> bool:
        """True iff the stick is within the angular margin of sealing a gap."""
        delta = self.tol.angular_margin_delta
        ax, ay = stick.a
        bx, by = stick.b
        length = math.hypot(bx - ax, by - ay)
        if length == 0.0:
            return False
        for gap in self.gap_sites():
            ux, uy = gap.line_dir_to_t()
            vx, vy = (bx - ax) / length, (by - ay) / length
            sin_ang = abs(ux * vy - uy * vx)
            if sin_ang > math.sin(delta) + 1e-15:
                continue
            minus = self.ring[gap.minus_idx]
            plus = self.ring[gap.plus_idx]
            m = length * math.sin(delta) + 1e-12 * self.diameter()
            d1, _ = dist_point_segment(minus, stick.a, stick.b)
            d2, _ = dist_point_segment(plus, stick.a, stick.b)
            if d1 <= m + self.eps_gap and d2 <= m + self.eps_gap:
                return True
        return False

    def stick_is_legal(self, sticks: Sequence[Segment]) -> bool:
        if self.mode != "path":
            return True
        if self.sticks_shut_door(sticks):
            return False
        return not any(self.stick_in_gap_margin(s) for s in sticks)


# ---------------------------------------------------------------------------

def _diameter(ring: Sequence[Point]) -> float:
    xs = [p.x for p in ring]
    ys = [p.y for p in ring]
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def _ring_edges(ring: Sequence[Point]) -> List[Tuple[Point, Point]]:
    return [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]


def _walk(i: int, j: int, n: int) -> List[int]:
    out = [i]
    while i != j:
        i = (i + 1) % n
        out.append(i)
    return out


def _locate_on_boundary(outer: List[Point], p: Point, tol_abs: float) -> Tuple[int, float]:
    """Edge index and parameter of the boundary point closest to p."""
    best = (math.inf, -1, 0.0)
    n = len(outer)
    for i in range(n):
        a, b = outer[i], outer[(i + 1) % n]
        d, w = dist_point_segment(p, a, b)
        if d < best[0]:
            tt = 0.0 if a == b else _param(w, a, b)
            best = (d, i, tt)
    if best[0] > tol_abs:
        raise ValueError(f"point {tuple(p)} is not on the outer boundary")
    return best[1], best[2]


def _param(p: Point, a: Point, b: Point) -> float:
    if abs(b.x - a.x) >= abs(b.y - a.y):
        return (p.x - a.x) / (b.x - a.x)
    return (p.y - a.y) / (b.y - a.y)


def _insert_gaps(outer: List[Point], s: Point, t: Point, eps_gap: float):
    n = len(outer)
    diam = _diameter(outer)
    es, ts_ = _locate_on_boundary(outer, s, 1e-7 * diam)
    et, tt_ = _locate_on_boundary(outer, t, 1e-7 * diam)
    if es == et:
        raise ValueError("s and t must lie on distinct edges of the outer boundary")

    def edge_pts(i: int) -> Tuple[Point, Point]:
        return outer[i], outer[(i + 1) % n]

    inserts = {es: [], et: []}
    # CCW order along the host edge: (plus, center, minus) for s, since the top
    # chain ends at s+; for t the bottom chain ends at t-, so (minus, center, plus).
    a, b = edge_pts(es)
    h = eps_gap / 2.0 / dist(a, b)
    inserts[es] = [(ts_ - h, "s+"), (ts_, "s"), (ts_ + h, "s-")]
    a2, b2 = edge_pts(et)
    h2 = eps_gap / 2.0 / dist(a2, b2)
    inserts[et] = [(tt_ - h2, "t-"), (tt_, "t"), (tt_ + h2, "t+")]

    for i, items in inserts.items():
        for (u, _name) in items:
            if not (1e-9 < u < 1 - 1e-9):
                raise ValueError("gap does not fit inside its host edge; "
                                 "move s/t or reduce eps_gap")

    ring: List[Point] = []
    tags = {}
    for i in range(n):
        a, b = edge_pts(i)
        ring.append(a)
        if i in inserts:
            for (u, name) in sorted(inserts[i]):
                q = Point(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y))
                tags[name] = len(ring)
                ring.append(q)
    s_idx, t_idx = tags["s"], tags["t"]
    gap_s = GapSite(center=ring[s_idx], minus_idx=tags["s-"], plus_idx=tags["s+"],
                    edge_b_end=outer[(es + 1) % n], edge_t_end=outer[es])
    gap_t = GapSite(center=ring[t_idx], minus_idx=tags["t-"], plus_idx=tags["t+"],
                    edge_b_end=outer[et], edge_t_end=outer[(et + 1) % n])
    return ring, s_idx, t_idx, gap_s, gap_t


def _touches(obj, seg: Tuple[Point, Point]) -> bool:
    a, b = seg
    if isinstance(obj, Segment):
        return segments_intersect(obj.a, obj.b, a, b)
    ring = obj
    for i in range(len(ring)):
        if segments_intersect(ring[i], ring[(i + 1) % len(ring)], a, b):
            return True
    return False


def _objects_meet(o1, o2) -> bool:
    segs1 = [(o1.a, o1.b)] if isinstance(o1, Segment) else _ring_edges(o1)
    segs2 = [(o2.a, o2.b)] if isinstance(o2, Segment) else _ring_edges(o2)
    for a, b in segs1:
        for c, d in segs2:
            if segments_intersect(a, b, c, d):
                return True
    # A segment fully inside a hole also counts as meeting it.
    if isinstance(o1, Segment) and not isinstance(o2, Segment):
        if point_in_ring(o1.a, o2) >= 0:
            return True
    if isinstance(o2, Segment) and not isinstance(o1, Segment):
        if point_in_ring(o2.a, o1) >= 0:
            return True
    return False


# ---------------------------------------------------------------------------

def validate_domain(d: PolygonalDomain) -> List[str]:
    """All invariant violations, as human-readable strings (empty list == ok)."""
    v: List[str] = []
    outer = d.orig_outer
    if len(outer) < 3:
        v.append("outer ring has fewer than 3 vertices")
        return v
    if not ring_is_simple(outer):
        v.append("outer not simple")
    if not is_ccw(outer):
        v.append("outer not counterclockwise")
    for k, h in enumerate(d.holes):
        if len(h) < 3:
            v.append(f"hole {k} has fewer than 3 vertices")
            continue
        if not ring_is_simple(h):
            v.append(f"hole {k} not simple")
        if is_ccw(h):
            v.append(f"hole {k} not clockwise")
        for p in h:
            if point_in_ring(p, outer) <= 0:
                v.append(f"hole {k} not strictly interior")
                break
        else:
            for a, b in _ring_edges(h):
                if any(segments_intersect(a, b, c, e) for c, e in _ring_edges(outer)):
                    v.append(f"hole {k} not strictly interior")
                    break
    for k1 in range(len(d.holes)):
        for k2 in range(k1 + 1, len(d.holes)):
            h1, h2 = d.holes[k1], d.holes[k2]
            meet = any(segments_intersect(a, b, c, e)
                       for a, b in _ring_edges(h1) for c, e in _ring_edges(h2))
            if not meet and (point_in_ring(h1[0], h2) > 0 or point_in_ring(h2[0], h1) > 0):
                meet = True
            if meet:
                v.append(f"holes {k1} and {k2} not disjoint")
    if d.mode == "path":
        if d.eps_gap is None or d.eps_gap <= 0:
            v.append("eps_gap must be positive")
        elif d.eps_gap > 0.01 * d.diameter():
            v.append("eps_gap exceeds the configured bound (1% of diameter)")
    elif d.mode == "flow":
        n = len(outer)
        for name, e in (("source", d.source_edge), ("sink", d.sink_edge)):
            if e is None or not (0 <= e < n):
                v.append(f"{name} edge index out of range")
        if not v and d.source_edge == d.sink_edge:
            v.append("source and sink edges coincide")
        if not v and (abs(d.source_edge - d.sink_edge) in (1, n - 1)):
            v.append("source and sink edges are adjacent")
    else:
        v.append(f"unknown mode {d.mode!r}")
    return v

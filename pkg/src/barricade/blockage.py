"""Reachable-endpoint region of chain-rooted sticks, complete-blockage test,
and the shortest s-t path H around the region.

The region is the chain fattened by the stick length, minus the gap slits:
along each gap's host edge, endpoint positions that only a gap-sealing
(door-shutting) stick could reach stay free, which leaves a zero-width crack
through which H escapes from s and t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .domain import GapSite, PolygonalDomain
from .geometry import (ArcPiece, Piece, Point, SegPiece, Segment,
                       circle_segment_intersections, dist, dist_point_chain,
                       dist_point_segment, dist_segment_segment, norm_angle,
                       offset_chain, splinegon_area, tangent_points_from_point,
                       common_tangents, ccw_span)
from .visibility import Environment

INF = math.inf
TWO_PI = 2.0 * math.pi


class ModelDegenerateError(ValueError):
    """s or t is engulfed by the region without a legal blocking witness."""


@dataclass
class BlockRegion:
    side: str                       # which chain is fattened: "bottom" | "top"
    stick_length: float
    chain: List[Point]
    loops: List[List[Piece]]        # offset splinegon boundary
    slits: List[Segment]            # carved gap corridors (zero width)

    def area(self) -> float:
        return sum(splinegon_area(l) for l in self.loops)

    def covers(self, p) -> bool:
        """True iff p is in the region (slit points are free)."""
        d, _ = dist_point_chain(p, self.chain)
        if d > self.stick_length:
            return False
        for slit in self.slits:
            ds, _ = dist_point_segment(p, slit.a, slit.b)
            if ds <= 1e-12 * (1.0 + self.stick_length):
                return False
        return True


@dataclass
class BlockageResult:
    blocked: bool
    witness: Optional[Segment]
    clearance: float                 # legal min distance between the chains
    supremum_limited: bool
    region: Optional[BlockRegion] = None


@dataclass
class PathAroundRegion:
    elements: List[dict]             # {"kind": "seg"/"arc", ...} with provenance
    length: float

    def points(self, arc_step: float = 0.05) -> List[Point]:
        """Flattened polyline (for rendering and sampling)."""
        out: List[Point] = []
        for el in self.elements:
            if el["kind"] == "seg":
                pts = [el["a"], el["b"]]
            else:
                c, r = el["center"], el["r"]
                t0, t1 = el["t0"], el["t1"]
                steps = max(2, int(abs(t1 - t0) * r / arc_step) + 1)
                pts = [Point(c.x + r * math.cos(t0 + (t1 - t0) * k / steps),
                             c.y + r * math.sin(t0 + (t1 - t0) * k / steps))
                       for k in range(steps + 1)]
            if out and pts and out[-1] == pts[0]:
                pts = pts[1:]
            out.extend(pts)
        return out


# ---------------------------------------------------------------------------
# legal chain distance and the blockage test

def _pair_witnesses(a: Point, b: Point, c: Point, d: Point) -> List[Segment]:
    """Candidate shortest-connection witnesses between two segments.

    The true minimizer plus shifted samples: when the minimizer is a
    door-shutting configuration, legal sticks realize lengths arbitrarily
    close to it, so nearby anchor points are tried as well.
    """
    dd, w1, w2 = dist_segment_segment(a, b, c, d)
    out = [Segment(w1, w2)]
    la = dist(a, b)
    for f in (1e-6, 1e-4, 1e-2, 0.05, 0.15, 0.35):
        for sgn in (+1.0, -1.0):
            if la == 0.0:
                continue
            t0 = _clamp01(_param_of(w1, a, b) + sgn * f)
            p = Point(a.x + t0 * (b.x - a.x), a.y + t0 * (b.y - a.y))
            _, q = dist_point_segment(p, c, d)
            out.append(Segment(p, q))
    for t0 in (0.25, 0.5, 0.75):
        p = Point(a.x + t0 * (b.x - a.x), a.y + t0 * (b.y - a.y))
        _, q = dist_point_segment(p, c, d)
        out.append(Segment(p, q))
    return out


def _param_of(p: Point, a: Point, b: Point) -> float:
    if abs(b.x - a.x) >= abs(b.y - a.y):
        return 0.0 if b.x == a.x else (p.x - a.x) / (b.x - a.x)
    return 0.0 if b.y == a.y else (p.y - a.y) / (b.y - a.y)


def _clamp01(t: float) -> float:
    return 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)


def legal_min_chain_distance(domain: PolygonalDomain) -> Tuple[float, Optional[Segment], bool]:
    """Min length of a door-rule-legal stick joining the two chains.

    Returns (length, witness segment, supremum_limited): the flag marks that
    an excluded (door-sealing) configuration would realize a shorter join, so
    the legal value is an approached infimum.
    """
    bot = domain.bottom_chain()
    top = domain.top_chain()
    pairs: List[Tuple[float, Tuple[Point, Point, Point, Point]]] = []
    for i in range(len(bot) - 1):
        for j in range(len(top) - 1):
            a, b = bot[i], bot[i + 1]
            c, d = top[j], top[j + 1]
            dd, _, _ = dist_segment_segment(a, b, c, d)
            pairs.append((dd, (a, b, c, d)))
    pairs.sort(key=lambda t: t[0])
    best = INF
    best_wit: Optional[Segment] = None
    raw_min = pairs[0][0] if pairs else INF
    tol = 1e-9 * (1.0 + domain.diameter())
    for dd, (a, b, c, d) in pairs:
        if dd >= best - tol:
            break
        for wit in _pair_witnesses(a, b, c, d):
            L = wit.length()
            if L == 0.0 or L >= best - 1e-15:
                continue
            if domain.stick_is_legal([wit]):
                best, best_wit = L, wit
    limited = best > raw_min + tol
    return best, best_wit, limited


def extend_witness(wit: Segment, overshoot: float) -> Segment:
    """Stretch a chain-to-chain witness slightly past both walls.

    Touching contacts computed in floating point can land an ulp short of the
    wall; the overshoot makes the blocking crossing robust on both sides.
    """
    L = wit.length()
    if L == 0.0:
        return wit
    ux, uy = (wit.b.x - wit.a.x) / L, (wit.b.y - wit.a.y) / L
    return Segment(Point(wit.a.x - overshoot * ux, wit.a.y - overshoot * uy),
                   Point(wit.b.x + overshoot * ux, wit.b.y + overshoot * uy))


def full_blockage_test(domain: PolygonalDomain, total_length: float) -> BlockageResult:
    """Can a single (super-)stick of the given length join the two chains?"""
    if domain.mode != "path":
        raise ValueError("full_blockage_test requires a path-mode domain")
    clearance, witness, limited = legal_min_chain_distance(domain)
    if clearance <= total_length:
        overshoot = min(1e-9 * (1.0 + domain.diameter()),
                        0.49 * max(total_length - clearance, 0.0))
        if witness is not None and overshoot > 0.0:
            ext = extend_witness(witness, overshoot)
            if domain.stick_is_legal([ext]):
                witness = ext
        return BlockageResult(True, witness, clearance, limited)
    region = build_block_region(domain, "bottom", total_length)
    return BlockageResult(False, None, clearance, limited, region=region)


# ---------------------------------------------------------------------------
# region construction

def _slit_for(domain: PolygonalDomain, side: str, gap: GapSite) -> Segment:
    if side == "bottom":
        start = domain.ring[gap.minus_idx]
        end = gap.edge_t_end
    else:
        start = domain.ring[gap.plus_idx]
        end = gap.edge_b_end
    return Segment(start, end)


def build_block_region(domain: PolygonalDomain, side: str, length: float) -> BlockRegion:
    if domain.mode != "path":
        raise ValueError("build_block_region requires a path-mode domain")
    if length <= 0:
        raise ValueError("stick length must be positive")
    chain = domain.chain(side)
    loops = offset_chain(chain, length)
    slits = [_slit_for(domain, side, g) for g in domain.gap_sites()]
    return BlockRegion(side, length, chain, loops, slits)


# ---------------------------------------------------------------------------
# crack exits

def crack_exit(domain: PolygonalDomain, side: str, gap: GapSite, length: float) -> Tuple[Point, float]:
    """First point along the gap slit where the path can leave the host line.

    Walking the slit itself is always possible (positions on it are reachable
    only by door-shutting sticks); the exit is where clearance from the whole
    fattened chain is reached. For on-line points the host sub-chain's
    coverage coincides with that of its end vertex, so the full chain is the
    right distance reference.
    """
    origin = domain.s if gap is domain.gap_s else domain.t
    ux, uy = gap.line_dir_to_t()
    if side == "top":
        ux, uy = -ux, -uy
    end = gap.edge_t_end if side == "bottom" else gap.edge_b_end
    slit_len = dist(origin, end)
    chain = domain.chain(side)

    def covered(d: float) -> bool:
        x = Point(origin.x + d * ux, origin.y + d * uy)
        return dist_point_chain(x, chain)[0] < length

    if not covered(0.0):
        return origin, 0.0
    step = min(length / 16.0, slit_len / 16.0)
    d = step
    while d < slit_len and covered(d):
        d += step
    if d >= slit_len and covered(slit_len):
        raise ModelDegenerateError(
            f"{'s' if gap is domain.gap_s else 't'} is sealed inside the region")
    lo, hi = d - step, min(d, slit_len)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if covered(mid):
            lo = mid
        else:
            hi = mid
    return Point(origin.x + hi * ux, origin.y + hi * uy), hi


# ---------------------------------------------------------------------------
# shortest path H around the region

@dataclass
class _Node:
    pos: Point
    kind: str                 # "point" | "portal"
    circle: Optional[int] = None   # chain vertex index for portals
    angle: Optional[float] = None


def path_around(domain: PolygonalDomain, region: BlockRegion) -> PathAroundRegion:
    """Shortest s-t path avoiding the open region (tangent graph over the
    chain-vertex circles, the opposite-chain vertices, and the crack exits)."""
    if domain.holes:
        raise ValueError("path_around supports simple polygons only")
    length = region.stick_length
    side = region.side
    chain = region.chain
    env = Environment(domain)

    # Crack exits at both gaps.
    exits: List[Tuple[Point, float, Point]] = []   # (exit point, crack length, door point)
    for gap, door in ((domain.gap_s, domain.s), (domain.gap_t, domain.t)):
        x0, d0 = crack_exit(domain, side, gap, length)
        exits.append((x0, d0, door))

    opp = domain.top_chain() if side == "bottom" else domain.bottom_chain()

    def clear_of_region(a: Point, b: Point) -> bool:
        """Segment keeps distance >= length from the chain (tangency allowed)."""
        tol = 1e-9 * (1.0 + length)
        for k in range(len(chain) - 1):
            dd, _, _ = dist_segment_segment(a, b, chain[k], chain[k + 1])
            if dd < length - tol:
                return False
        return True

    def seg_ok(a: Point, b: Point) -> bool:
        if a == b:
            return False
        return clear_of_region(a, b) and env.visible(a, b)

    # -- nodes -------------------------------------------------------------
    points: List[Point] = [x for (x, _, _) in exits]
    points += [p for p in opp]
    # Deduplicate while preserving order.
    seen = set()
    pts: List[Point] = []
    for p in points:
        key = (p.x, p.y)
        if key not in seen:
            seen.add(key)
            pts.append(p)
    circles = list(range(len(chain)))

    # Valid angular windows per circle.
    windows: List[List[Tuple[float, float]]] = []
    for ci in circles:
        windows.append(_circle_windows(domain, env, chain, ci, length))

    # Portals: tangent contacts on circles.
    portals: List[List[float]] = [[] for _ in circles]
    tangent_edges: List[Tuple[Tuple[str, int], Tuple[str, int], float, Point, Point]] = []

    def add_portal(ci: int, p: Point) -> int:
        ang = math.atan2(p.y - chain[ci].y, p.x - chain[ci].x)
        portals[ci].append(ang)
        return len(portals[ci]) - 1

    # point -> circle tangents
    for pi, p in enumerate(pts):
        for ci in circles:
            for tp in tangent_points_from_point(p, chain[ci], length):
                if not _angle_in_windows(math.atan2(tp.y - chain[ci].y, tp.x - chain[ci].x),
                                         windows[ci]):
                    continue
                if not seg_ok(p, tp):
                    continue
                k = add_portal(ci, tp)
                tangent_edges.append((("pt", pi), ("portal", _pid(ci, k)), dist(p, tp), p, tp))

    # circle -> circle tangents
    for c1 in circles:
        for c2 in circles:
            if c2 <= c1:
                continue
            for (p1, p2) in common_tangents(chain[c1], length, chain[c2], length):
                a1 = math.atan2(p1.y - chain[c1].y, p1.x - chain[c1].x)
                a2 = math.atan2(p2.y - chain[c2].y, p2.x - chain[c2].x)
                if not _angle_in_windows(a1, windows[c1]):
                    continue
                if not _angle_in_windows(a2, windows[c2]):
                    continue
                if not seg_ok(p1, p2):
                    continue
                k1 = add_portal(c1, p1)
                k2 = add_portal(c2, p2)
                tangent_edges.append((("portal", _pid(c1, k1)), ("portal", _pid(c2, k2)),
                                      dist(p1, p2), p1, p2))

    # point -> point edges
    pt_edges: List[Tuple[int, int, float]] = []
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if seg_ok(pts[i], pts[j]):
                pt_edges.append((i, j, dist(pts[i], pts[j])))

    # -- assemble graph -----------------------------------------------------
    # Node ids: point i -> ("pt", i); portal -> ("portal", pid)
    adj: Dict[object, List[Tuple[object, float, dict]]] = {}

    def link(u, v, w, info):
        adj.setdefault(u, []).append((v, w, info))
        adj.setdefault(v, []).append((u, w, _rev(info)))

    for (u, v, w, a, b) in tangent_edges:
        link(u, v, w, {"kind": "seg", "a": a, "b": b})
    for (i, j, w) in pt_edges:
        link(("pt", i), ("pt", j), w, {"kind": "seg", "a": pts[i], "b": pts[j]})

    # Arc edges between consecutive portals of each circle (within one window).
    portal_pos: Dict[int, Point] = {}
    for ci in circles:
        angs = portals[ci]
        for k, ang in enumerate(angs):
            portal_pos[_pid(ci, k)] = Point(chain[ci].x + length * math.cos(ang),
                                            chain[ci].y + length * math.sin(ang))
        for (w0, w1) in windows[ci]:
            inside = sorted(
                [(norm_angle(a - w0), k) for k, a in enumerate(angs)
                 if norm_angle(a - w0) <= norm_angle(w1 - w0) + 1e-12],
                key=lambda t: t[0])
            for (o1, k1), (o2, k2) in zip(inside[:-1], inside[1:]):
                if o2 - o1 <= 1e-15:
                    continue
                w = (o2 - o1) * length
                link(("portal", _pid(ci, k1)), ("portal", _pid(ci, k2)), w,
                     {"kind": "arc", "vertex": ci, "center": chain[ci], "r": length,
                      "t0": norm_angle(w0 + o1), "t1": norm_angle(w0 + o1) + (o2 - o1)})

    # -- Dijkstra from s to t ------------------------------------------------
    import heapq
    start = ("pt", 0)
    goal = ("pt", 1)
    dd: Dict[object, float] = {start: exits[0][1]}   # crack length from s
    par: Dict[object, Tuple[object, dict]] = {}
    pq = [(dd[start], 0, start)]
    cnt = 1
    while pq:
        d, _, u = heapq.heappop(pq)
        if d > dd.get(u, INF):
            continue
        if u == goal:
            break
        for (v, w, info) in adj.get(u, []):
            nd = d + w
            if nd < dd.get(v, INF) - 1e-15:
                dd[v] = nd
                par[v] = (u, info)
                heapq.heappush(pq, (nd, cnt, v))
                cnt += 1
    if goal not in dd:
        raise RuntimeError("no path around the region (unexpected for unblocked input)")

    total = dd[goal] + exits[1][1]
    elements: List[dict] = []
    if exits[0][1] > 0:
        elements.append({"kind": "seg", "a": exits[0][2], "b": exits[0][0],
                         "crack": True})
    chain_elems: List[dict] = []
    cur = goal
    while cur != start:
        u, info = par[cur]
        chain_elems.append(info)
        cur = u
    elements.extend(reversed(chain_elems))
    if exits[1][1] > 0:
        elements.append({"kind": "seg", "a": exits[1][0], "b": exits[1][2],
                         "crack": True})
    return PathAroundRegion(elements, total)


def _pid(ci: int, k: int) -> int:
    return ci * 10_000 + k


def _rev(info: dict) -> dict:
    out = dict(info)
    if info["kind"] == "seg":
        out["a"], out["b"] = info["b"], info["a"]
    else:
        out["t0"], out["t1"] = info["t1"], info["t0"]
    return out


def _angle_in_windows(ang: float, windows: List[Tuple[float, float]]) -> bool:
    for (w0, w1) in windows:
        if norm_angle(ang - w0) <= norm_angle(w1 - w0) + 1e-12:
            return True
    return False


def _circle_windows(domain: PolygonalDomain, env: Environment, chain: List[Point],
                    ci: int, length: float) -> List[Tuple[float, float]]:
    """Angular windows of circle ci that lie on the free side of the region
    boundary and inside the polygon."""
    c = chain[ci]
    crit: List[float] = []
    # Circle-circle splits with every other chain vertex.
    from .geometry import circle_circle_intersections
    for k, v in enumerate(chain):
        if k == ci:
            continue
        for p in circle_circle_intersections(c, length, v, length):
            crit.append(math.atan2(p.y - c.y, p.x - c.x))
    # Offset tangency directions of the adjacent (and nearby) chain edges.
    for k in range(len(chain) - 1):
        a, b = chain[k], chain[k + 1]
        dd, _ = dist_point_segment(c, a, b)
        if dd > 2.0 * length + 1e-12:
            continue
        d = dist(a, b)
        nx, ny = -(b.y - a.y) / d, (b.x - a.x) / d
        ang = math.atan2(ny, nx)
        crit += [ang, ang + math.pi]
        # Stadium boundary crossings.
        for sgn in (+1.0, -1.0):
            oa = Point(a.x + sgn * length * nx, a.y + sgn * length * ny)
            ob = Point(b.x + sgn * length * nx, b.y + sgn * length * ny)
            for t in circle_segment_intersections(c, length, oa, ob):
                p = Point(oa.x + t * (ob.x - oa.x), oa.y + t * (ob.y - oa.y))
                crit.append(math.atan2(p.y - c.y, p.x - c.x))
    # Polygon boundary crossings.
    for (a, b) in env.obstacles:
        for t in circle_segment_intersections(c, length, a, b):
            p = Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
            crit.append(math.atan2(p.y - c.y, p.x - c.x))

    crit = sorted(set(norm_angle(t) for t in crit))
    if not crit:
        crit = [0.0]
    windows: List[Tuple[float, float]] = []
    m = len(crit)
    tol = 1e-9 * (1.0 + length)
    for k in range(m):
        a0 = crit[k]
        span = ccw_span(crit[k], crit[(k + 1) % m]) if m > 1 else TWO_PI
        if span <= 1e-12:
            span = TWO_PI if m == 1 else span
            if span <= 1e-12:
                continue
        mid = a0 + span / 2.0
        p = Point(c.x + length * math.cos(mid), c.y + length * math.sin(mid))
        dd, _ = dist_point_chain(p, chain)
        if dd < length - tol:
            continue
        if domain.contains(p, boundary_tol=tol) < 0:
            continue
        windows.append((a0, a0 + span))
    return _merge_windows(windows)


def _merge_windows(windows: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    if not windows:
        return []
    windows = sorted((norm_angle(a), norm_angle(a) + (b - a)) for (a, b) in windows)
    merged = [list(windows[0])]
    for (a, b) in windows[1:]:
        if a <= merged[-1][1] + 1e-12:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    # Wraparound join.
    if len(merged) >= 2 and merged[0][0] + TWO_PI <= merged[-1][1] + 1e-12:
        merged[0][0] = merged[-1][0] - TWO_PI
        merged[0][1] = max(merged[0][1], merged[-1][1] - TWO_PI)
        merged.pop()
    return [(a, b) for (a, b) in merged]

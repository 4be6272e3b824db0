"""Visibility graphs and shortest paths in polygonal domains with holes,
with barrier segments injected as extra obstacles.

Barrier semantics: a path may touch a barrier endpoint and may run along a
barrier, but may not cross its interior transversally.
"""

from __future__ import annotations

import heapq
import math
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .domain import PolygonalDomain
from .geodesic import GeodesicPath, path_length
from .geometry import Point, Segment, dist, on_segment, orientation, pt

INF = math.inf


class VisibilityGraph(NamedTuple):
    nodes: List[Point]
    edges: List[Tuple[int, int]]
    weights: Dict[Tuple[int, int], float]


class Environment:
    """Free space of a domain plus optional fixed obstacle segments."""

    def __init__(self, domain: PolygonalDomain, extra: Sequence[Segment] = ()):
        self.domain = domain
        self.extra = [Segment(pt(s.a), pt(s.b)) for s in extra]
        self.obstacles: List[Tuple[Point, Point]] = domain.obstacle_edges()
        self.obstacles += [(s.a, s.b) for s in self.extra]
        self._ea = np.array([[e[0].x, e[0].y] for e in self.obstacles], dtype=float)
        self._eb = np.array([[e[1].x, e[1].y] for e in self.obstacles], dtype=float)
        verts: List[Point] = list(domain.ring)
        for h in domain.holes:
            verts.extend(h)
        for s in self.extra:
            for p in (s.a, s.b):
                if domain.contains(p) >= 0:
                    verts.append(p)
        self.base_nodes = verts
        self._vx = np.array([[p.x, p.y] for p in verts], dtype=float)
        scale = domain.diameter()
        self._tol = 1e-12 * max(scale, 1.0)
        self._cross_band = 1e-9 * max(scale, 1.0) ** 2
        self._band = 1e-9 * max(scale, 1.0)

    # -- low-level visibility ------------------------------------------------

    def _proper_cross_any(self, a: Point, b: Point,
                          ea: Optional[np.ndarray] = None,
                          eb: Optional[np.ndarray] = None,
                          obstacles: Optional[List[Tuple[Point, Point]]] = None) -> bool:
        if ea is None:
            ea, eb, obstacles = self._ea, self._eb, self.obstacles
        ax, ay, bx, by = a.x, a.y, b.x, b.y
        d1 = (bx - ax) * (ea[:, 1] - ay) - (by - ay) * (ea[:, 0] - ax)
        d2 = (bx - ax) * (eb[:, 1] - ay) - (by - ay) * (eb[:, 0] - ax)
        ex, ey = eb[:, 0] - ea[:, 0], eb[:, 1] - ea[:, 1]
        d3 = ex * (ay - ea[:, 1]) - ey * (ax - ea[:, 0])
        d4 = ex * (by - ea[:, 1]) - ey * (bx - ea[:, 0])
        band = self._cross_band
        definite = (d1 * d2 < -band) & (d3 * d4 < -band)
        if definite.any():
            return True
        # Near-degenerate candidates get the exact predicate.
        maybe = ((d1 * d2 < band) & (d3 * d4 < band) &
                 ((np.abs(d1) < band) | (np.abs(d2) < band) |
                  (np.abs(d3) < band) | (np.abs(d4) < band)))
        if maybe.any():
            from .geometry import segments_cross
            for k in np.nonzero(maybe)[0]:
                c, d = obstacles[k]
                if segments_cross(a, b, c, d):
                    return True
        return False

    def _touch_params(self, a: Point, b: Point) -> List[float]:
        """Params in (0,1) where ab meets an obstacle vertex (possible pass-throughs)."""
        ax, ay = a.x, a.y
        dx, dy = b.x - a.x, b.y - a.y
        L2 = dx * dx + dy * dy
        if L2 == 0.0:
            return []
        vx = self._vx
        crossv = dx * (vx[:, 1] - ay) - dy * (vx[:, 0] - ax)
        t = ((vx[:, 0] - ax) * dx + (vx[:, 1] - ay) * dy) / L2
        near = (np.abs(crossv) <= 1e-9 * math.sqrt(L2)) & (t > 1e-12) & (t < 1 - 1e-12)
        return sorted(set(np.round(t[near], 15).tolist()))

    def visible(self, a: Point, b: Point) -> bool:
        """Open segment ab stays in the closed free space and crosses no obstacle."""
        if a == b:
            return False
        if self._proper_cross_any(a, b):
            return False
        params = [0.0] + self._touch_params(a, b) + [1.0]
        for t0, t1 in zip(params[:-1], params[1:]):
            tm = 0.5 * (t0 + t1)
            mid = Point(a.x + tm * (b.x - a.x), a.y + tm * (b.y - a.y))
            if self.min_obstacle_dist(mid) <= self._band:
                continue  # riding an obstacle boundary is allowed
            if self.domain.contains(mid) < 0:
                return False
        return True

    def min_obstacle_dist(self, p) -> float:
        """Distance from p to the nearest obstacle edge (vectorized)."""
        px, py = p[0], p[1]
        ax, ay = self._ea[:, 0], self._ea[:, 1]
        vx, vy = self._eb[:, 0] - ax, self._eb[:, 1] - ay
        L2 = vx * vx + vy * vy
        t = np.clip(((px - ax) * vx + (py - ay) * vy) / np.maximum(L2, 1e-300), 0.0, 1.0)
        dx, dy = px - (ax + t * vx), py - (ay + t * vy)
        return float(np.sqrt(np.min(dx * dx + dy * dy)))

    # -- graph building --------------------------------------------------------

    def graph(self, extra_points: Sequence[Point] = ()) -> VisibilityGraph:
        nodes = list(self.base_nodes)
        for p in extra_points:
            q = pt(p)
            if q not in nodes:
                nodes.append(q)
        n = len(nodes)
        edges: List[Tuple[int, int]] = []
        weights: Dict[Tuple[int, int], float] = {}
        for i in range(n):
            for j in range(i + 1, n):
                if self.visible(nodes[i], nodes[j]):
                    w = dist(nodes[i], nodes[j])
                    edges.append((i, j))
                    weights[(i, j)] = w
        return VisibilityGraph(nodes, edges, weights)


def dijkstra(n: int, adj: List[List[Tuple[int, float]]], src: int) -> Tuple[List[float], List[int]]:
    dd = [INF] * n
    par = [-1] * n
    dd[src] = 0.0
    pq = [(0.0, src)]
    while pq:
        d, u = heapq.heappop(pq)
        if d > dd[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dd[v] - 1e-15:
                dd[v] = nd
                par[v] = u
                heapq.heappush(pq, (nd, v))
    return dd, par


def _adj_from(vg: VisibilityGraph) -> List[List[Tuple[int, float]]]:
    adj: List[List[Tuple[int, float]]] = [[] for _ in vg.nodes]
    for (i, j) in vg.edges:
        w = vg.weights[(i, j)]
        adj[i].append((j, w))
        adj[j].append((i, w))
    return adj


class SectorGraph:
    """Visibility graph with nodes split into angular sectors.

    A path may touch obstacle endpoints but never cross the local union of
    obstacle segments incident to a node: each node is split into the angular
    sectors between its incident obstacle directions, a graph edge attaches to
    the sector containing its direction (both adjacent sectors when exactly
    collinear with an obstacle ray), and there is no edge between sectors.
    """

    ANG_TOL = 1e-9

    def __init__(self, env: Environment, extra_points: Sequence[Point] = ()):
        self.env = env
        domain = env.domain
        pos: List[Point] = list(env.base_nodes)
        for p in extra_points:
            q = pt(p)
            if q not in pos:
                pos.append(q)
        self.pos = pos
        obstacles = env.obstacles
        # Incident obstacle ray angles per node position.
        rays: List[List[float]] = []
        for x in pos:
            ang: List[float] = []
            for (a, b) in obstacles:
                if x == a:
                    ang.append(math.atan2(b.y - a.y, b.x - a.x))
                elif x == b:
                    ang.append(math.atan2(a.y - b.y, a.x - b.x))
                elif on_segment(x, a, b):
                    ang.append(math.atan2(b.y - a.y, b.x - a.x))
                    ang.append(math.atan2(a.y - b.y, a.x - b.x))
            ang = sorted(set(_norm(t) for t in ang))
            merged: List[float] = []
            for t in ang:
                if not merged or t - merged[-1] > self.ANG_TOL:
                    merged.append(t)
            if merged and len(merged) >= 2 and merged[0] + 2 * math.pi - merged[-1] <= self.ANG_TOL:
                merged.pop()
            rays.append(merged)
        self.rays = rays
        # Sector copies, restricted to sectors that open into free space.
        probe_eps = 1e-7 * max(domain.diameter(), 1.0)
        self.copy_of: List[List[Optional[int]]] = []  # node -> per-sector copy id or None
        self.copy_node: List[int] = []
        for i, merged in enumerate(rays):
            k = max(1, len(merged))
            ids: List[Optional[int]] = []
            for s in range(k):
                if not merged:
                    free = True
                else:
                    a = merged[s]
                    b = merged[(s + 1) % k] + (2 * math.pi if s + 1 == k else 0.0)
                    mid_ang = 0.5 * (a + b)
                    probe = Point(pos[i].x + probe_eps * math.cos(mid_ang),
                                  pos[i].y + probe_eps * math.sin(mid_ang))
                    free = domain.contains(probe) > 0
                if free:
                    ids.append(len(self.copy_node))
                    self.copy_node.append(i)
                else:
                    ids.append(None)
            self.copy_of.append(ids)
        n_cp = len(self.copy_node)
        self.adj: List[List[Tuple[int, float]]] = [[] for _ in range(n_cp)]
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                if not env.visible(pos[i], pos[j]):
                    continue
                w = dist(pos[i], pos[j])
                ang_ij = math.atan2(pos[j].y - pos[i].y, pos[j].x - pos[i].x)
                ang_ji = math.atan2(pos[i].y - pos[j].y, pos[i].x - pos[j].x)
                for ci in self._sectors_for(i, ang_ij):
                    for cj in self._sectors_for(j, ang_ji):
                        self.adj[ci].append((cj, w))
                        self.adj[cj].append((ci, w))

    def _sectors_for(self, node: int, ang: float) -> List[int]:
        merged = self.rays[node]
        ids = self.copy_of[node]
        if len(merged) <= 1:
            return [c for c in ids if c is not None]
        ang = _norm(ang)
        out = []
        k = len(merged)
        for s in range(k):
            if ids[s] is None:
                continue
            a = merged[s]
            b = merged[(s + 1) % k] + (2 * math.pi if s + 1 == k else 0.0)
            t = ang if ang >= a - self.ANG_TOL else ang + 2 * math.pi
            if a - self.ANG_TOL <= t <= b + self.ANG_TOL:
                out.append(ids[s])
        return out

    def shortest(self, p: Point, q: Point) -> Tuple[float, List[Point]]:
        ip = self.pos.index(p)
        iq = self.pos.index(q)
        n_cp = len(self.copy_node)
        dd = [INF] * n_cp
        par = [-1] * n_cp
        pqh: List[Tuple[float, int]] = []
        for c in self.copy_of[ip]:
            if c is None:
                continue
            dd[c] = 0.0
            pqh.append((0.0, c))
        heapq.heapify(pqh)
        while pqh:
            d, u = heapq.heappop(pqh)
            if d > dd[u]:
                continue
            for v, w in self.adj[u]:
                nd = d + w
                if nd < dd[v] - 1e-15:
                    dd[v] = nd
                    par[v] = u
                    heapq.heappush(pqh, (nd, v))
        goals = [c for c in self.copy_of[iq] if c is not None]
        if not goals:
            return INF, [p, q]
        best = min(goals, key=lambda c: dd[c])
        if dd[best] == INF:
            return INF, [p, q]
        chain = [best]
        while par[chain[-1]] != -1:
            chain.append(par[chain[-1]])
        pts = [self.pos[self.copy_node[c]] for c in reversed(chain)]
        # Collapse repeated positions from sector bookkeeping.
        out = [pts[0]]
        for x in pts[1:]:
            if x != out[-1]:
                out.append(x)
        return dd[best], out


def _norm(t: float) -> float:
    t = math.fmod(t, 2 * math.pi)
    return t + 2 * math.pi if t < 0 else t


def shortest_path_holes(domain: PolygonalDomain, p, q,
                        barriers: Sequence[Segment] = ()) -> GeodesicPath:
    """Shortest p-q path avoiding holes and barrier interiors.

    Returns a path with length == inf when p and q are disconnected.
    """
    p, q = pt(p), pt(q)
    for x in (p, q):
        if domain.contains(x) < 0:
            raise ValueError(f"point {tuple(x)} outside the free space")
    env = Environment(domain, extra=barriers)
    sg = SectorGraph(env, extra_points=[p, q])
    length, pts = sg.shortest(p, q)
    return GeodesicPath(pts, length)


def evaluate_barriers(domain: PolygonalDomain, barriers: Sequence[Segment]) -> GeodesicPath:
    """Reference objective: shortest s-t path with the barriers in place (path mode)."""
    return shortest_path_holes(domain, domain.s, domain.t, barriers)


def barrier_blocks(domain: PolygonalDomain, barriers: Sequence[Segment]) -> bool:
    """True iff the barriers (with holes) join the bottom chain to the top chain."""
    bottom_segs = [(domain.ring[i], domain.ring[j]) for i, j in
                   zip(domain.bottom_idx[:-1], domain.bottom_idx[1:])]
    top_segs = [(domain.ring[i], domain.ring[j]) for i, j in
                zip(domain.top_idx[:-1], domain.top_idx[1:])]

    objs: List[object] = list(barriers) + list(domain.holes)
    nb = len(objs)

    def touches(obj, segs) -> bool:
        from .geometry import segments_intersect
        if isinstance(obj, Segment):
            own = [(obj.a, obj.b)]
        else:
            own = [(obj[i], obj[(i + 1) % len(obj)]) for i in range(len(obj))]
        for a, b in own:
            for c, d in segs:
                if segments_intersect(a, b, c, d):
                    return True
        return False

    from .domain import _objects_meet
    touch_b = [touches(o, bottom_segs) for o in objs]
    touch_t = [touches(o, top_segs) for o in objs]
    adj = [[False] * nb for _ in range(nb)]
    for i in range(nb):
        for j in range(i + 1, nb):
            if _objects_meet(objs[i], objs[j]):
                adj[i][j] = adj[j][i] = True
    stack = [i for i in range(nb) if touch_b[i]]
    seen = set(stack)
    while stack:
        i = stack.pop()
        if touch_t[i]:
            return True
        for j in range(nb):
            if adj[i][j] and j not in seen:
                seen.add(j)
                stack.append(j)
    return False

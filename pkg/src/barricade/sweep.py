"""Fast exact objective for a single stick rooted at a domain vertex.

For a stick [v, v + L*(cos t, sin t)] the shortest s-t path either avoids the
stick entirely (a Dijkstra value on the visibility graph minus the edges the
stick cuts) or wraps around the free tip q (best last-bend node on each side).
Both parts are evaluated over whole angle grids: edge-cut and tip-visibility
masks are painted per angular interval, and Dijkstra runs are cached per
distinct cut set.
"""

from __future__ import annotations

import heapq
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .domain import PolygonalDomain
from .geometry import (Point, Segment, circle_segment_intersections, dist,
                       norm_angle, segments_cross)
from .visibility import Environment

INF = math.inf
TWO_PI = 2.0 * math.pi


class PathEngine:
    """Per-domain machinery shared by sweeps: nodes, visibility, distances.

    A stick rooted at a boundary vertex seals turning across it at the root:
    the root's free wedge is split into the two sub-wedges on either side of
    the stick, and shortest-path queries carry a side assignment of the root's
    incident edges (the root is duplicated into a virtual node for the far
    side). The free tip can be wrapped from either side.
    """

    def __init__(self, domain: PolygonalDomain, frozen: Sequence[Segment] = ()):
        if domain.mode != "path":
            raise ValueError("PathEngine requires a path-mode domain")
        self.domain = domain
        self.frozen = list(frozen)
        self.env = Environment(domain, extra=self.frozen)
        self.nodes: List[Point] = list(self.env.base_nodes)
        self._node_ix = {p: i for i, p in enumerate(self.nodes)}
        self.s_idx = self._node_ix[domain.s]
        self.t_idx = self._node_ix[domain.t]
        n = len(self.nodes)
        self.adj: List[List[Tuple[int, float, int]]] = [[] for _ in range(n)]
        self.edges: List[Tuple[int, int]] = []
        for i in range(n):
            for j in range(i + 1, n):
                if self.env.visible(self.nodes[i], self.nodes[j]):
                    eid = len(self.edges)
                    w = dist(self.nodes[i], self.nodes[j])
                    self.edges.append((i, j))
                    self.adj[i].append((j, w, eid))
                    self.adj[j].append((i, w, eid))
        self._dij_cache: Dict = {}
        self._exact_cache: Dict[Tuple[int, float, float], float] = {}
        ea = [[self.nodes[i].x, self.nodes[i].y] for (i, j) in self.edges]
        eb = [[self.nodes[j].x, self.nodes[j].y] for (i, j) in self.edges]
        self._edge_a = np.array(ea, dtype=float) if ea else np.zeros((0, 2))
        self._edge_b = np.array(eb, dtype=float) if eb else np.zeros((0, 2))
        self._nx = np.array([[p.x, p.y] for p in self.nodes], dtype=float)
        # Boundary-ring neighbors per node (for wedge geometry at roots).
        self._ring_next: Dict[int, int] = {}
        self._ring_prev: Dict[int, int] = {}
        rings = [domain.ring] + list(domain.holes)
        for ring in rings:
            m = len(ring)
            for k in range(m):
                i = self._node_ix.get(ring[k])
                j = self._node_ix.get(ring[(k + 1) % m])
                if i is not None and j is not None:
                    self._ring_next[i] = j
                    self._ring_prev[j] = i
        self.root_ids = [self._node_ix[domain.ring[k]] for k in range(len(domain.ring))
                         if k not in (domain.s_idx, domain.t_idx)]
        for h in domain.holes:
            self.root_ids += [self._node_ix[p] for p in h]

    # -- wedge side tags -----------------------------------------------------

    def wedge_offsets(self, root_idx: int) -> Tuple[float, np.ndarray]:
        """(offset of each incident edge direction, anchor angle) at the root.

        Offsets are CCW angles from the direction to the ring-successor; the
        free wedge spans offsets [0, offset(ring-predecessor)].
        """
        v = self.nodes[root_idx]
        nxt = self.nodes[self._ring_next[root_idx]]
        anchor = math.atan2(nxt.y - v.y, nxt.x - v.x)
        offs = np.empty(len(self.adj[root_idx]))
        for k, (x, _, _) in enumerate(self.adj[root_idx]):
            p = self.nodes[x]
            o = norm_angle(math.atan2(p.y - v.y, p.x - v.x) - anchor)
            if o > TWO_PI - 1e-9:
                o = 0.0   # collinear with the wedge anchor (fp wraparound)
            offs[k] = o
        return anchor, offs

    def side_tags(self, root_idx: int, theta: float,
                  anchor: float, offs: np.ndarray) -> Optional[bytes]:
        """Per-incident-edge tags (0 near side, 1 far side, 2 both) or None."""
        o_t = norm_angle(theta - anchor)
        tol = 1e-9
        tags = np.where(offs < o_t - tol, 0, np.where(offs > o_t + tol, 1, 2)).astype(np.int8)
        if (tags == 0).all() or (tags == 1).all():
            return None
        return tags.tobytes()

    # -- shortest paths with an edge mask and optional root split -------------

    def distances(self, src: int, cut: frozenset,
                  split: Optional[Tuple[int, bytes]] = None) -> np.ndarray:
        """Distances from src; entry [n] is the far-side root copy when split."""
        key = (src, cut, split)
        hit = self._dij_cache.get(key)
        if hit is not None:
            return hit
        n = len(self.nodes)
        adj = self.adj
        v2 = n
        if split is not None:
            root_idx, tags_b = split
            tags = np.frombuffer(tags_b, dtype=np.int8)
            adj = list(self.adj)
            near = []
            far = []
            redirect: Dict[int, int] = {}   # eid -> 0 near, 1 far, 2 both
            for k, (x, w, eid) in enumerate(self.adj[root_idx]):
                tg = int(tags[k])
                redirect[eid] = tg
                if tg in (0, 2):
                    near.append((x, w, eid))
                if tg in (1, 2):
                    far.append((x, w, eid))
            adj[root_idx] = near
            patched: Dict[int, List[Tuple[int, float, int]]] = {}
            for (x, w, eid) in self.adj[root_idx]:
                tg = redirect[eid]
                lst = patched.get(x)
                if lst is None:
                    lst = list(self.adj[x])
                    patched[x] = lst
                for kk, (to, ww, e2) in enumerate(lst):
                    if to == root_idx and e2 == eid:
                        if tg == 1:
                            lst[kk] = (v2, ww, e2)
                        elif tg == 2:
                            lst.append((v2, ww, e2))
                        break
            for x, lst in patched.items():
                adj[x] = lst
            adj = adj + [far]
        dd = np.full(n + 1, INF)
        dd[src] = 0.0
        pq = [(0.0, src)]
        if split is not None and split[0] == src:
            dd[v2] = 0.0
            pq.append((0.0, v2))
        while pq:
            d, u = heapq.heappop(pq)
            if d > dd[u]:
                continue
            for v, w, eid in adj[u]:
                if eid in cut:
                    continue
                nd = d + w
                if nd < dd[v] - 1e-15:
                    dd[v] = nd
                    heapq.heappush(pq, (nd, v))
        self._dij_cache[key] = dd
        return dd

    def cut_edges_of(self, stick: Segment) -> frozenset:
        a, b = stick.a, stick.b
        if len(self.edges) == 0:
            return frozenset()
        ax, ay, bx, by = a.x, a.y, b.x, b.y
        ea, eb = self._edge_a, self._edge_b
        d1 = (bx - ax) * (ea[:, 1] - ay) - (by - ay) * (ea[:, 0] - ax)
        d2 = (bx - ax) * (eb[:, 1] - ay) - (by - ay) * (eb[:, 0] - ax)
        ex, ey = eb[:, 0] - ea[:, 0], eb[:, 1] - ea[:, 1]
        d3 = ex * (ay - ea[:, 1]) - ey * (ax - ea[:, 0])
        d4 = ex * (by - ea[:, 1]) - ey * (bx - ea[:, 0])
        # Conservative prefilter (fp signs flip near degeneracies), exact confirm.
        thr = 1e-12 * (np.abs(d1) + np.abs(d2)) * (np.abs(d3) + np.abs(d4)) + 1e-300
        cand = np.nonzero((d1 * d2 < thr) & (d3 * d4 < thr))[0]
        out = set()
        for k in cand:
            i, j = self.edges[k]
            if segments_cross(a, b, self.nodes[i], self.nodes[j]):
                out.add(int(k))
        return frozenset(out)

    # -- exact scalar objective -------------------------------------------------

    def tip_inside(self, q: Point) -> bool:
        if self.env.min_obstacle_dist(q) <= self.env._band:
            return False
        return self.domain.contains(q) > 0

    def stick_objective(self, root_idx: int, theta: float, length: float,
                        require_legal: bool = True) -> float:
        """Exact shortest s-t length with the stick in place (inf = blocked).

        Returns nan for placements excluded by the door rule.
        """
        v = self.nodes[root_idx]
        key = (root_idx, theta, length)
        hit = self._exact_cache.get(key)
        if hit is not None:
            return hit
        q = Point(v.x + length * math.cos(theta), v.y + length * math.sin(theta))
        stick = Segment(v, q)
        if require_legal and not self.domain.stick_is_legal([stick] + self.frozen):
            self._exact_cache[key] = math.nan
            return math.nan
        cut = self.cut_edges_of(stick)
        split = None
        if root_idx in self._ring_next:
            anchor, offs = self.wedge_offsets(root_idx)
            tags_key = self.side_tags(root_idx, theta, anchor, offs)
            if tags_key is not None:
                split = (root_idx, tags_key)
        ds = self.distances(self.s_idx, cut, split)
        dt = self.distances(self.t_idx, cut, split)
        val = float(ds[self.t_idx])
        if split is not None and split[0] == self.t_idx:
            val = min(val, float(ds[len(self.nodes)]))
        if self.tip_inside(q):
            n = len(self.nodes)
            dq = np.hypot(self._nx[:, 0] - q.x, self._nx[:, 1] - q.y)
            vis_cache: Dict[int, bool] = {}

            def visible_w(w: int) -> bool:
                got = vis_cache.get(w)
                if got is None:
                    got = self.env.visible(self.nodes[w], q)
                    vis_cache[w] = got
                return got

            bs = _best_leg(ds[:n] + dq, visible_w)
            bt = _best_leg(dt[:n] + dq, visible_w)
            if split is not None and visible_w(root_idx):
                # Far-side root copy reaches the tip along the stick too.
                bs = min(bs, float(ds[n]) + length)
                bt = min(bt, float(dt[n]) + length)
            val = min(val, bs + bt)
        self._exact_cache[key] = val
        return val


# ---------------------------------------------------------------------------
# angular utilities

def _paint_intervals(grid_k: int, step: float, intervals: List[Tuple[float, float]],
                     out_row: np.ndarray) -> None:
    """Mark grid angles k*step lying in any CCW interval (a, b)."""
    for a, b in intervals:
        a = norm_angle(a)
        span = norm_angle(b - a)
        k0 = int(math.ceil(a / step - 1e-9))
        k1 = int(math.floor((a + span) / step + 1e-9))
        if k1 < k0:
            continue
        ks = np.arange(k0, k1 + 1) % grid_k
        out_row[ks] = True


def _circle_line_angles(v: Point, r: float, a: Point, b: Point) -> List[float]:
    """Angles where the circle around v meets the (full) line ab."""
    out = []
    big = 4.0 * (1.0 + dist(v, a) + dist(v, b) + r)
    dx, dy = b.x - a.x, b.y - a.y
    L = math.hypot(dx, dy)
    if L == 0.0:
        return out
    ux, uy = dx / L, dy / L
    pa = Point(a.x - big * ux, a.y - big * uy)
    pb = Point(a.x + big * ux, a.y + big * uy)
    for t in circle_segment_intersections(v, r, pa, pb):
        p = Point(pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y))
        out.append(math.atan2(p.y - v.y, p.x - v.x))
    return out


class StickSweep:
    """Grid evaluation of the stick objective for one root vertex."""

    def __init__(self, engine: PathEngine, root_idx: int, length: float,
                 step_deg: float):
        self.engine = engine
        self.root_idx = root_idx
        self.length = length
        self.step = math.radians(step_deg)
        self.K = max(8, int(round(TWO_PI / self.step)))
        self.step = TWO_PI / self.K
        self.thetas = np.arange(self.K) * self.step
        self.v = engine.nodes[root_idx]

    # -- masks ------------------------------------------------------------

    def _critical_angles_pair(self, w: Point, c: Point, d: Point) -> List[float]:
        v, r = self.v, self.length
        angles = []
        angles += _circle_line_angles(v, r, w, c)
        angles += _circle_line_angles(v, r, w, d)
        angles += _circle_line_angles(v, r, c, d)
        return angles

    def _status_mask(self, crit: List[float], test) -> np.ndarray:
        """Boolean grid mask from a piecewise-constant predicate on angles."""
        row = np.zeros(self.K, dtype=bool)
        crit = sorted(set(norm_angle(t) for t in crit))
        if not crit:
            if test(0.0):
                row[:] = True
            return row
        m = len(crit)
        for i in range(m):
            a = crit[i]
            b = crit[(i + 1) % m] if i + 1 < m else crit[0] + TWO_PI
            span = norm_angle(b - a)
            if span == 0.0:
                span = TWO_PI
            if test(a + span / 2.0):
                _paint_intervals(self.K, self.step, [(a, a + span)], row)
        return row

    def occlusion_mask(self, w: Point, obstacles: List[Tuple[Point, Point]]) -> np.ndarray:
        """Grid mask: segment w->q(theta) properly crosses some obstacle edge."""
        v, r = self.v, self.length
        blocked = np.zeros(self.K, dtype=bool)
        for (c, d) in obstacles:
            if w == c or w == d:
                continue
            # Every sight segment w->q lies in the stadium around (w, v) of
            # radius r; edges outside it can never occlude.
            if _seg_seg_dist(w, v, c, d) > r + 1e-12:
                continue
            crit = self._critical_angles_pair(w, c, d)

            def crossed(theta: float) -> bool:
                q = Point(v.x + r * math.cos(theta), v.y + r * math.sin(theta))
                return segments_cross(w, q, c, d)

            blocked |= self._status_mask(crit, crossed)
        return blocked

    def cut_mask(self) -> Tuple[np.ndarray, List[int]]:
        """(E_rel x K) mask of graph edges properly crossed by the stick."""
        eng = self.engine
        v, r = self.v, self.length
        rel = []
        for eid, (i, j) in enumerate(eng.edges):
            d, _ = _seg_dist(v, eng.nodes[i], eng.nodes[j])
            if d < r:
                rel.append(eid)
        mask = np.zeros((len(rel), self.K), dtype=bool)
        for row, eid in enumerate(rel):
            i, j = eng.edges[eid]
            c, d = eng.nodes[i], eng.nodes[j]
            if c == v or d == v:
                continue
            crit = _circle_line_angles(v, r, c, d)
            crit += [math.atan2(c.y - v.y, c.x - v.x),
                     math.atan2(d.y - v.y, d.x - v.x)]

            def crossed(theta: float) -> bool:
                q = Point(v.x + r * math.cos(theta), v.y + r * math.sin(theta))
                return segments_cross(v, q, c, d)

            mask[row] = self._status_mask(crit, crossed)
        return mask, rel

    def tip_free_mask(self) -> np.ndarray:
        v, r = self.v, self.length
        crit: List[float] = []
        for (c, d) in self.engine.env.obstacles:
            for t in circle_segment_intersections(v, r, c, d):
                p = Point(c.x + t * (d.x - c.x), c.y + t * (d.y - c.y))
                crit.append(math.atan2(p.y - v.y, p.x - v.x))

        def free(theta: float) -> bool:
            q = Point(v.x + r * math.cos(theta), v.y + r * math.sin(theta))
            return self.engine.tip_inside(q)

        return self._status_mask(crit, free)

    def legal_mask(self) -> np.ndarray:
        """Door-rule legality per grid angle.

        A single stick can only seal a gap (or sit in its angular margin) when
        nearly collinear with the gap's host edge, so exact checks run only in
        a narrow cone around the two host-line directions.
        """
        dom = self.engine.domain
        out = np.ones(self.K, dtype=bool)
        v, r = self.v, self.length
        for gap in dom.gap_sites():
            minus, plus = dom.ring[gap.minus_idx], dom.ring[gap.plus_idx]
            if min(dist(v, minus), dist(v, plus)) > r * (1.0 + 4 * dom.tol.angular_margin_delta):
                continue
            ux, uy = gap.line_dir_to_t()
            phi = math.atan2(uy, ux)
            cone = dom.tol.angular_margin_delta + (dom.eps_gap + 1e-9) / max(r, 1e-12) \
                + 2.0 * self.step
            for k in range(self.K):
                theta = float(self.thetas[k])
                dphi = abs(math.remainder(theta - phi, math.pi))
                if dphi > cone:
                    continue
                q = Point(v.x + r * math.cos(theta), v.y + r * math.sin(theta))
                if not dom.stick_is_legal([Segment(v, q)]):
                    out[k] = False
        return out

    # -- objective over the grid -------------------------------------------

    def grid_values(self) -> Tuple[np.ndarray, np.ndarray]:
        """(values, legal) arrays over the angle grid; values[k] = inf when blocked."""
        eng = self.engine
        v, r = self.v, self.length
        K = self.K
        qx = v.x + r * np.cos(self.thetas)
        qy = v.y + r * np.sin(self.thetas)

        cmask, rel = self.cut_mask()
        if len(rel):
            cut_keys = [cmask[:, k].tobytes() for k in range(K)]
        else:
            cut_keys = [b""] * K
        cut_of: Dict[bytes, frozenset] = {}
        for k, key in enumerate(cut_keys):
            if key not in cut_of:
                cut_of[key] = frozenset(int(rel[r_]) for r_ in np.nonzero(cmask[:, k])[0])

        # Root-wedge side tags per angle.
        split_keys: List[Optional[bytes]] = [None] * K
        if self.root_idx in eng._ring_next:
            anchor, offs = eng.wedge_offsets(self.root_idx)
            o_t = np.array([norm_angle(t - anchor) for t in self.thetas])
            tol = 1e-9
            tags = np.where(offs[:, None] < o_t[None, :] - tol, 0,
                            np.where(offs[:, None] > o_t[None, :] + tol, 1, 2)).astype(np.int8)
            for k in range(K):
                col = tags[:, k]
                if not ((col == 0).all() or (col == 1).all()):
                    split_keys[k] = col.tobytes()

        nnodes = len(eng.nodes)
        vis_ok = np.zeros((nnodes, K), dtype=bool)
        for w in range(nnodes):
            vis_ok[w] = ~self.occlusion_mask(eng.nodes[w], eng.env.obstacles)
        tip_ok = self.tip_free_mask()

        nx = np.array([[p.x, p.y] for p in eng.nodes])
        dq = np.hypot(nx[:, 0:1] - qx[None, :], nx[:, 1:2] - qy[None, :])  # (N,K)

        values = np.full(K, INF)
        groups: Dict[Tuple[bytes, Optional[bytes]], List[int]] = {}
        for k in range(K):
            groups.setdefault((cut_keys[k], split_keys[k]), []).append(k)
        for (ckey, skey), cols_l in groups.items():
            cols = np.array(cols_l, dtype=int)
            cut = cut_of[ckey]
            split = None if skey is None else (self.root_idx, skey)
            ds = eng.distances(eng.s_idx, cut, split)
            dt = eng.distances(eng.t_idx, cut, split)
            A = ds[eng.t_idx]
            if split is not None and split[0] == eng.t_idx:
                A = min(A, ds[nnodes])
            sub_vis = vis_ok[:, cols]
            dqs = dq[:, cols]
            bs = np.where(sub_vis, ds[:nnodes, None] + dqs, INF).min(axis=0)
            bt = np.where(sub_vis, dt[:nnodes, None] + dqs, INF).min(axis=0)
            if split is not None:
                stick_vis = vis_ok[self.root_idx, cols]
                bs = np.minimum(bs, np.where(stick_vis, ds[nnodes] + r, INF))
                bt = np.minimum(bt, np.where(stick_vis, dt[nnodes] + r, INF))
            through = np.where(tip_ok[cols], bs + bt, INF)
            values[cols] = np.minimum(A, through)

        return values, self.legal_mask()

    # -- refinement ----------------------------------------------------------

    def value_at(self, theta: float) -> float:
        return self.engine.stick_objective(self.root_idx, norm_angle(theta), self.length)

    def refine(self, theta0: float, span: float, rounds: int,
               points: int = 21) -> Tuple[float, float]:
        """Re-grid around theta0, shrinking the window 10x per round."""
        best_t, best_v = theta0, self.value_at(theta0)
        if math.isnan(best_v):
            best_v = -INF
        for _ in range(rounds):
            ts = best_t + np.linspace(-span, span, points)
            for t in ts:
                val = self.value_at(float(t))
                if not math.isnan(val) and val > best_v:
                    best_t, best_v = norm_angle(float(t)), val
            span /= 10.0
        return best_t, best_v


def _best_leg(costs: np.ndarray, visible_w) -> float:
    """Min over nodes of cost, verifying visibility lazily in cost order."""
    order = np.argsort(costs)
    for w in order:
        c = float(costs[w])
        if c == INF:
            return INF
        if visible_w(int(w)):
            return c
    return INF


def _seg_dist(p: Point, a: Point, b: Point) -> Tuple[float, Point]:
    from .geometry import dist_point_segment
    return dist_point_segment(p, a, b)


def _seg_seg_dist(a: Point, b: Point, c: Point, d: Point) -> float:
    from .geometry import dist_segment_segment
    return dist_segment_segment(a, b, c, d)[0]

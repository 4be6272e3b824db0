"""Geodesics inside a simple polygon: triangulation, funnel shortest paths,
geodesic trees, and shortest path maps (SPM).

The SPM of a source point decomposes the polygon into cells; all points of a
cell share the last bend vertex (the cell root) of their geodesic from the
source. Cell boundaries interior to the polygon are straight "windows": each
is the extension of the geodesic-tree edge ending at a reflex vertex, drawn
until it hits the boundary.
"""

from __future__ import annotations

import math
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .geometry import (Point, dist, on_segment, orientation, point_in_ring,
                       pt, seg_intersection_params)


class GeodesicPath(NamedTuple):
    points: List[Point]
    length: float


def path_length(points: Sequence[Point]) -> float:
    return sum(dist(points[i], points[i + 1]) for i in range(len(points) - 1))


# ---------------------------------------------------------------------------
# triangulation (ear clipping)

def triangulate(ring: Sequence) -> List[Tuple[int, int, int]]:
    """Ear-clip a CCW simple polygon; returns vertex-index triples.

    Vertices interior to a straight boundary run carry no area and are dropped
    from the fan (the triangles still tile the polygon).
    """
    ring = [pt(p) for p in ring]
    n = len(ring)
    if n < 3:
        raise ValueError("polygon needs at least 3 vertices")
    idx = list(range(n))
    # Drop straight-through vertices first.
    changed = True
    while changed and len(idx) > 3:
        changed = False
        for k in range(len(idx)):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % len(idx)]
            if orientation(ring[i0], ring[i1], ring[i2]) == 0:
                d1 = (ring[i1].x - ring[i0].x, ring[i1].y - ring[i0].y)
                d2 = (ring[i2].x - ring[i1].x, ring[i2].y - ring[i1].y)
                if d1[0] * d2[0] + d1[1] * d2[1] > 0:
                    idx.pop(k)
                    changed = True
                    break

    tris: List[Tuple[int, int, int]] = []
    guard = 0
    while len(idx) > 3 and guard < 4 * n * n:
        guard += 1
        m = len(idx)
        clipped = False
        for k in range(m):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % m]
            a, b, c = ring[i0], ring[i1], ring[i2]
            if orientation(a, b, c) <= 0:
                continue
            ok = True
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                p = ring[j]
                if (orientation(a, b, p) >= 0 and orientation(b, c, p) >= 0
                        and orientation(c, a, p) >= 0):
                    ok = False
                    break
            if ok:
                tris.append((i0, i1, i2))
                idx.pop(k)
                clipped = True
                break
        if not clipped:
            raise ValueError("ear clipping failed; polygon must be simple and CCW")
    if len(idx) == 3:
        i0, i1, i2 = idx
        if orientation(ring[i0], ring[i1], ring[i2]) > 0:
            tris.append((i0, i1, i2))
    return tris


# ---------------------------------------------------------------------------
# funnel shortest paths

def _tri_contains(a: Point, b: Point, c: Point, p) -> bool:
    return (orientation(a, b, p) >= 0 and orientation(b, c, p) >= 0
            and orientation(c, a, p) >= 0)


class SimplePolygonGeodesics:
    """Shortest-path engine for one simple polygon (no holes)."""

    def __init__(self, ring: Sequence):
        self.ring = [pt(p) for p in ring]
        self._scale = max(max(abs(p.x), abs(p.y)) for p in self.ring)
        self.tris = triangulate(self.ring)
        self._adj: Dict[int, List[Tuple[int, Tuple[int, int]]]] = {i: [] for i in range(len(self.tris))}
        edge_map: Dict[Tuple[int, int], List[int]] = {}
        for ti, (i, j, k) in enumerate(self.tris):
            for u, v in ((i, j), (j, k), (k, i)):
                edge_map.setdefault((min(u, v), max(u, v)), []).append(ti)
        for (u, v), owners in edge_map.items():
            if len(owners) == 2:
                t1, t2 = owners
                self._adj[t1].append((t2, (u, v)))
                self._adj[t2].append((t1, (u, v)))
        self._tree_cache: Dict[Tuple[int, int], "GeodesicTree"] = {}
        self._spm_cache: Dict[Tuple[int, int], "ShortestPathMap"] = {}
        self._vid: Dict[Tuple[float, float], int] = {}
        for i, p in enumerate(self.ring):
            self._vid.setdefault((p.x, p.y), i)

    # -- triangle location --

    def locate_triangle(self, p) -> int:
        for ti, (i, j, k) in enumerate(self.tris):
            if _tri_contains(self.ring[i], self.ring[j], self.ring[k], p):
                return ti
        # Tolerant pass: accept a triangle whose boundary is within fp noise
        # (points sampled on wall-hugging geodesics can fall out by an ulp).
        best_ti, best_d = -1, math.inf
        for ti, (i, j, k) in enumerate(self.tris):
            worst = 0.0
            for a, b in ((self.ring[i], self.ring[j]), (self.ring[j], self.ring[k]),
                         (self.ring[k], self.ring[i])):
                c = (b.x - a.x) * (p[1] - a.y) - (b.y - a.y) * (p[0] - a.x)
                L = math.hypot(b.x - a.x, b.y - a.y)
                if L > 0:
                    worst = max(worst, -c / L)
            if worst < best_d:
                best_ti, best_d = ti, worst
        if best_d <= 1e-9 * max(self._scale, 1.0):
            return best_ti
        raise ValueError(f"point {tuple(p)} outside polygon")

    def contains(self, p) -> bool:
        try:
            self.locate_triangle(p)
            return True
        except ValueError:
            return False

    # -- funnel --

    def shortest_path(self, p, q) -> GeodesicPath:
        p, q = pt(p), pt(q)
        tp = self.locate_triangle(p)
        tq = self.locate_triangle(q)
        if tp == tq:
            return GeodesicPath([p, q], dist(p, q))
        # BFS through the dual tree.
        prev: Dict[int, Tuple[int, Tuple[int, int]]] = {tp: (-1, (-1, -1))}
        stack = [tp]
        while stack:
            cur = stack.pop()
            if cur == tq:
                break
            for nxt, diag in self._adj[cur]:
                if nxt not in prev:
                    prev[nxt] = (cur, diag)
                    stack.append(nxt)
        diags: List[Tuple[int, int]] = []
        cur = tq
        while cur != tp:
            parent, diag = prev[cur]
            diags.append(diag)
            cur = parent
        diags.reverse()

        portals = self._orient_portals(tp, diags)
        pts = _string_pull(portals, p, q)
        pts = _clean_path(pts)
        return GeodesicPath(pts, path_length(pts))

    def _orient_portals(self, tp: int, diags: List[Tuple[int, int]]) -> List[Tuple[Point, Point]]:
        portals: List[Tuple[Point, Point]] = []
        prev_l: Optional[Point] = None
        prev_r: Optional[Point] = None
        for di, (u, v) in enumerate(diags):
            a, b = self.ring[u], self.ring[v]
            if di == 0:
                # Orient by the start triangle's third vertex (behind us).
                w3 = next(self.ring[k] for k in self.tris[tp] if k not in (u, v))
                left, right = (a, b) if orientation(w3, a, b) < 0 else (b, a)
            else:
                # Consecutive sleeve diagonals share exactly one endpoint;
                # the shared endpoint keeps its side.
                if a == prev_l:
                    left, right = a, b
                elif b == prev_l:
                    left, right = b, a
                elif a == prev_r:
                    left, right = b, a
                elif b == prev_r:
                    left, right = a, b
                else:
                    o = orientation(prev_l, prev_r, a)
                    left, right = (a, b) if o >= 0 else (b, a)
            portals.append((left, right))
            prev_l, prev_r = left, right
        return portals

    # -- trees and maps --

    def _key(self, p: Point) -> Tuple[int, int]:
        return (round(p.x * 2 ** 32), round(p.y * 2 ** 32))

    def tree(self, src) -> "GeodesicTree":
        src = pt(src)
        key = self._key(src)
        if key not in self._tree_cache:
            self._tree_cache[key] = GeodesicTree(self, src)
        return self._tree_cache[key]

    def spm(self, src) -> "ShortestPathMap":
        src = pt(src)
        key = self._key(src)
        if key not in self._spm_cache:
            self._spm_cache[key] = ShortestPathMap(self, src)
        return self._spm_cache[key]

    def vertex_id(self, p: Point) -> Optional[int]:
        return self._vid.get((p.x, p.y))


def _string_pull(portals: List[Tuple[Point, Point]], p: Point, q: Point) -> List[Point]:
    """Two-chain funnel over an ordered list of (left, right) portals.

    Invariants: `fun` holds the funnel polyline from left lip to right lip,
    `fun[ai]` is the apex, and `path` is the geodesic from p to the apex.
    """
    fun: List[Point] = [p]
    ai = 0
    path: List[Point] = [p]

    def insert_right(w: Point) -> None:
        nonlocal ai
        if w == fun[-1]:
            return
        if w == fun[ai]:
            # Portal pinches at the apex: the funnel collapses to a point.
            del fun[:]
            fun.append(w)
            ai = 0
            return
        while len(fun) >= 2:
            if len(fun) - 1 > ai:
                a, b = fun[-2], fun[-1]
                if orientation(a, b, w) >= 0:
                    fun.pop()
                else:
                    break
            else:
                b, a = fun[-1], fun[-2]   # apex and its left neighbor
                o = orientation(b, a, w)
                if o > 0 or (o == 0 and not on_segment(w, b, a)):
                    fun.pop()
                    ai -= 1
                    path.append(fun[-1])
                else:
                    break
        fun.append(w)

    def insert_left(w: Point) -> None:
        nonlocal ai
        if w == fun[0]:
            return
        if w == fun[ai]:
            del fun[:]
            fun.append(w)
            ai = 0
            return
        while len(fun) >= 2:
            if ai > 0:
                a, b = fun[1], fun[0]
                if orientation(a, b, w) <= 0:
                    fun.pop(0)
                    ai -= 1
                else:
                    break
            else:
                b, a = fun[0], fun[1]     # apex and its right neighbor
                o = orientation(b, a, w)
                if o < 0 or (o == 0 and not on_segment(w, b, a)):
                    fun.pop(0)
                    path.append(fun[0])
                else:
                    break
        fun.insert(0, w)
        ai += 1

    prev_l: Optional[Point] = None
    prev_r: Optional[Point] = None
    for (l, r) in portals:
        if prev_l is None:
            insert_left(l)
            insert_right(r)
        else:
            if l == prev_l and r == prev_r:
                pass
            elif l == prev_l:
                insert_right(r)
            elif r == prev_r:
                insert_left(l)
            else:
                insert_left(l)
                insert_right(r)
        prev_l, prev_r = l, r

    if q != fun[ai]:
        insert_right(q)
        path.extend(fun[ai + 1:])
    return path


def _clean_path(pts: List[Point]) -> List[Point]:
    out: List[Point] = []
    for p in pts:
        if not out or p != out[-1]:
            out.append(p)
    # Remove straight-through bends (collinear artifacts of the funnel).
    k = 1
    while k < len(out) - 1:
        if orientation(out[k - 1], out[k], out[k + 1]) == 0 and \
                on_segment(out[k], out[k - 1], out[k + 1]):
            out.pop(k)
        else:
            k += 1
    return out


# ---------------------------------------------------------------------------
# geodesic tree and SPM

class GeodesicTree:
    """Geodesics from a fixed source to every polygon vertex."""

    def __init__(self, geo: SimplePolygonGeodesics, src: Point):
        self.geo = geo
        self.src = src
        n = len(geo.ring)
        self.dist: List[float] = [0.0] * n
        self.parent: List[Optional[Point]] = [None] * n
        self.path: List[List[Point]] = [[]] * n
        for i in range(n):
            gp = geo.shortest_path(src, geo.ring[i])
            self.dist[i] = gp.length
            self.path[i] = gp.points
            self.parent[i] = gp.points[-2] if len(gp.points) >= 2 else None

    def root_of(self, p) -> Tuple[Point, float]:
        """Last bend vertex of the geodesic src->p, and the distance to it."""
        gp = self.geo.shortest_path(self.src, p)
        if len(gp.points) >= 2:
            r = gp.points[-2]
            return r, gp.length - dist(r, p)
        return self.src, 0.0


class SpmCell(NamedTuple):
    polygon: List[Point]
    root: Point
    root_vertex: Optional[int]   # ring index; None when the root is the source
    dist_root: float


class SpmWindow(NamedTuple):
    vertex: int        # ring index of the casting (far-root) vertex
    seg: Tuple[Point, Point]


class ShortestPathMap:
    """SPM of a simple polygon from one source point."""

    def __init__(self, geo: SimplePolygonGeodesics, src: Point):
        self.geo = geo
        self.src = src
        self.tree = geo.tree(src)
        self.windows = self._build_windows()
        self.cells = self._build_cells()

    # -- windows --

    def _build_windows(self) -> List[SpmWindow]:
        ring = self.geo.ring
        n = len(ring)
        out: List[SpmWindow] = []
        for i in range(n):
            par = self.tree.parent[i]
            if par is None or par == ring[i]:
                continue
            v = ring[i]
            dx, dy = v.x - par.x, v.y - par.y
            nd = math.hypot(dx, dy)
            d = (dx / nd, dy / nd)
            if not _direction_enters(ring, i, d):
                continue
            hit = _ray_hit(ring, i, v, d)
            if hit is None:
                continue
            out.append(SpmWindow(i, (v, hit)))
        return out

    # -- cells --

    def _build_cells(self) -> List[SpmCell]:
        faces: List[List[Point]] = [list(self.geo.ring)]
        kept: List[SpmWindow] = []
        for w in self.windows:
            a, z = w.seg
            placed = False
            for fi, face in enumerate(faces):
                split = _split_face(face, a, z)
                if split is not None:
                    faces.pop(fi)
                    faces.extend(split)
                    placed = True
                    break
            if placed:
                kept.append(w)
                continue
            # Windows grazing along the boundary cut off a zero-width sliver;
            # they carry no cell and are dropped.
            ring = self.geo.ring
            mid = Point((a.x + z.x) / 2, (a.y + z.y) / 2)
            tol = 1e-8 * (1.0 + self.geo._scale)
            near_boundary = any(_near_segment(mid, ring[k], ring[(k + 1) % len(ring)], tol)
                                for k in range(len(ring)))
            if not near_boundary:
                raise AssertionError("window does not fit any face")
        self.windows = kept
        cells: List[SpmCell] = []
        for face in faces:
            try:
                x = _interior_point(face)
            except (AssertionError, ValueError):
                continue   # zero-area sliver from a boundary-grazing window
            root, droot = self.tree.root_of(x)
            rv = self.geo.vertex_id(root)
            cells.append(SpmCell(face, root, rv, droot))
        return cells

    def locate(self, p) -> SpmCell:
        best: Optional[SpmCell] = None
        best_val = math.inf
        for cell in self.cells:
            if point_in_ring(p, cell.polygon) >= 0:
                val = cell.dist_root + dist(cell.root, p)
                if val < best_val - 1e-15:
                    best, best_val = cell, val
        if best is None:
            raise ValueError(f"point {tuple(p)} outside polygon")
        return best

    def evaluate(self, p) -> float:
        cell = self.locate(p)
        return cell.dist_root + dist(cell.root, p)


def _direction_enters(ring: List[Point], i: int, d: Tuple[float, float]) -> bool:
    """True iff direction d points strictly into the polygon interior at vertex i."""
    n = len(ring)
    v = ring[i]
    a = ring[(i + 1) % n]   # next
    b = ring[i - 1]         # prev
    o = Point(0.0, 0.0)
    da = Point(a.x - v.x, a.y - v.y)
    db = Point(b.x - v.x, b.y - v.y)
    dd = Point(d[0], d[1])
    oa = orientation(o, da, dd)
    ob = orientation(o, dd, db)
    sector = orientation(o, da, db)
    if sector > 0:
        return oa > 0 and ob > 0
    if sector < 0:
        return oa > 0 or ob > 0
    # Straight or pinched vertex.
    return oa > 0 and ob > 0


def _ray_hit(ring: List[Point], i: int, origin: Point, d: Tuple[float, float]) -> Optional[Point]:
    n = len(ring)
    far = Point(origin.x + d[0], origin.y + d[1])
    best_t = math.inf
    best: Optional[Point] = None
    for j in range(n):
        if j == i or (j + 1) % n == i:
            continue
        a, b = ring[j], ring[(j + 1) % n]
        pr = seg_intersection_params(origin, far, a, b)
        if pr is None:
            continue
        t, u = pr
        if t > 1e-12 and -1e-12 <= u <= 1 + 1e-12:
            if t < best_t:
                best_t = t
                best = Point(origin.x + t * d[0], origin.y + t * d[1])
    return best


def _split_face(face: List[Point], a: Point, z: Point) -> Optional[List[List[Point]]]:
    """Split a face polygon by chord (a, z) if both endpoints lie on it."""
    tol = 1e-9 * (1.0 + max(max(abs(p.x), abs(p.y)) for p in face))
    face = _locate_or_insert(face, a, tol)
    if face is None:
        return None
    face = _locate_or_insert(face, z, tol)
    if face is None:
        return None
    ia = _find_vertex(face, a, tol)
    iz = _find_vertex(face, z, tol)
    if ia is None or iz is None or ia == iz:
        return None
    # The chord must pass inside this face.
    mid = Point((a.x + z.x) / 2.0, (a.y + z.y) / 2.0)
    if point_in_ring(mid, face) < 0:
        return None
    n = len(face)
    f1 = [face[k % n] for k in range(ia, ia + (iz - ia) % n + 1)]
    f2 = [face[k % n] for k in range(iz, iz + (ia - iz) % n + 1)]
    if len(f1) < 3 or len(f2) < 3:
        return None
    return [f1, f2]


def _find_vertex(face: List[Point], p: Point, tol: float) -> Optional[int]:
    best, best_d = None, tol
    for k, fp in enumerate(face):
        d = dist(fp, p)
        if d <= best_d:
            best, best_d = k, d
    return best


def _locate_or_insert(face: List[Point], p: Point, tol: float) -> Optional[List[Point]]:
    """Face with p present as a vertex (matched or inserted on an edge)."""
    if _find_vertex(face, p, tol) is not None:
        return face
    n = len(face)
    for k in range(n):
        if on_segment(p, face[k], face[(k + 1) % n]) or \
                _near_segment(p, face[k], face[(k + 1) % n], tol):
            return face[:k + 1] + [p] + face[k + 1:]
    return None


def _near_segment(p: Point, a: Point, b: Point, tol: float) -> bool:
    from .geometry import dist_point_segment
    d, _ = dist_point_segment(p, a, b)
    return d < tol


def _interior_point(face: List[Point]) -> Point:
    tris = triangulate(face)
    best = None
    best_area = 0.0
    scale = max(max(abs(p.x), abs(p.y)) for p in face)
    for (i, j, k) in tris:
        a, b, c = face[i], face[j], face[k]
        area = abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
        if area > best_area:
            best_area = area
            best = Point((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    if best is None or best_area <= 1e-20 * max(scale, 1.0) ** 2:
        raise AssertionError("face has no area")
    return best


# ---------------------------------------------------------------------------
# convexity probe (geodesic distance to a geodesic is convex)

def geodesic_convexity_probe(geo: SimplePolygonGeodesics, p, q, r,
                             samples: int = 32) -> float:
    """Max violation of convexity of x -> d(p, x) along the geodesic q->r.

    Samples the geodesic by arclength and compares against the chord between
    the endpoint values; for a convex function the result is <= 0 up to noise.
    """
    base = geo.shortest_path(q, r)
    if base.length == 0.0:
        return 0.0
    # Arclength-parameterized sample points.
    targets = [base.length * k / (samples + 1) for k in range(1, samples + 1)]
    xs: List[Tuple[float, Point]] = []
    acc = 0.0
    seg_i = 0
    pts = base.points
    for tgt in targets:
        while seg_i < len(pts) - 1 and acc + dist(pts[seg_i], pts[seg_i + 1]) < tgt:
            acc += dist(pts[seg_i], pts[seg_i + 1])
            seg_i += 1
        seg_len = dist(pts[seg_i], pts[seg_i + 1])
        lam = 0.0 if seg_len == 0 else (tgt - acc) / seg_len
        xs.append((tgt, Point(pts[seg_i].x + lam * (pts[seg_i + 1].x - pts[seg_i].x),
                              pts[seg_i].y + lam * (pts[seg_i + 1].y - pts[seg_i].y))))
    g0 = geo.shortest_path(p, q).length
    g1 = geo.shortest_path(p, r).length
    worst = 0.0
    for tgt, x in xs:
        lam = tgt / base.length
        chord = (1.0 - lam) * g0 + lam * g1
        worst = max(worst, geo.shortest_path(p, x).length - chord)
    return worst

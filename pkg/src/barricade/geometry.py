"""Planar geometric primitives: exact-sign predicates, segment/circle kernels,
and offset (chain + disk) splinegon construction.

Everything downstream builds on these. Sign computations (orientation) are
exact for double inputs via a float filter with an exact fallback; metric
computations are plain doubles compared with relative tolerances.
"""

from __future__ import annotations

import math

from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple


class Point(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    a: Point
    b: Point

    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)


def pt(p) -> Point:
    """Coerce any 2-sequence to a Point."""
    if isinstance(p, Point):
        return p
    return Point(float(p[0]), float(p[1]))


TWO_PI = 2.0 * math.pi

# Shewchuk-style static filter bound for the 2x2 orientation determinant.
_EPS = math.ulp(1.0) / 2.0
_CCW_ERR = (3.0 + 16.0 * _EPS) * _EPS


def _exact_orient(px, py, qx, qy, rx, ry) -> int:
    """Exact determinant sign via scaled integer arithmetic.

    Doubles are dyadic rationals; scaling all six coordinates by the largest
    denominator turns the 2x2 determinant into exact integer arithmetic.
    """
    ratios = [float(v).as_integer_ratio() for v in (px, py, qx, qy, rx, ry)]
    common = max(d for _, d in ratios)
    ip, jp, iq, jq, ir, jr = (n * (common // d) for n, d in ratios)
    det = (iq - ip) * (jr - jp) - (jq - jp) * (ir - ip)
    return (det > 0) - (det < 0)


def orientation(p, q, r) -> int:
    """Exact sign of the signed area of triangle pqr: +1 left turn, -1 right, 0 collinear."""
    px, py = p[0], p[1]
    qx, qy = q[0], q[1]
    rx, ry = r[0], r[1]
    detl = (qx - px) * (ry - py)
    detr = (qy - py) * (rx - px)
    det = detl - detr
    detsum = abs(detl) + abs(detr)
    if abs(det) > _CCW_ERR * detsum:
        return 1 if det > 0 else -1
    return _exact_orient(px, py, qx, qy, rx, ry)


def cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def dot(o, a, b) -> float:
    return (a[0] - o[0]) * (b[0] - o[0]) + (a[1] - o[1]) * (b[1] - o[1])


def dist(a, b) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def on_segment(p, a, b) -> bool:
    """True iff p lies on the closed segment ab (exact collinearity test)."""
    if orientation(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_cross(a, b, c, d) -> bool:
    """Proper crossing: the open segments ab and cd intersect transversally."""
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments share at least one point (touching or overlap counts)."""
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and on_segment(c, a, b):
        return True
    if o2 == 0 and on_segment(d, a, b):
        return True
    if o3 == 0 and on_segment(a, c, d):
        return True
    if o4 == 0 and on_segment(b, c, d):
        return True
    return False


def segments_overlap_collinear(a, b, c, d) -> bool:
    """True iff ab and cd are collinear and overlap in more than a point."""
    if orientation(a, b, c) != 0 or orientation(a, b, d) != 0:
        return False
    # Project on the dominant axis.
    if abs(b[0] - a[0]) >= abs(b[1] - a[1]):
        lo1, hi1 = sorted((a[0], b[0]))
        lo2, hi2 = sorted((c[0], d[0]))
    else:
        lo1, hi1 = sorted((a[1], b[1]))
        lo2, hi2 = sorted((c[1], d[1]))
    return min(hi1, hi2) - max(lo1, lo2) > 0.0


def seg_intersection_params(a, b, c, d) -> Optional[Tuple[float, float]]:
    """Parameters (t, u) with a+t(b-a) = c+u(d-c), or None if parallel."""
    rx, ry = b[0] - a[0], b[1] - a[1]
    sx, sy = d[0] - c[0], d[1] - c[1]
    denom = rx * sy - ry * sx
    if denom == 0.0:
        return None
    qpx, qpy = c[0] - a[0], c[1] - a[1]
    t = (qpx * sy - qpy * sx) / denom
    u = (qpx * ry - qpy * rx) / denom
    return t, u


def project_param(p, a, b) -> float:
    """Parameter of the orthogonal projection of p onto line ab (0 at a, 1 at b)."""
    vx, vy = b[0] - a[0], b[1] - a[1]
    den = vx * vx + vy * vy
    if den == 0.0:
        return 0.0
    return ((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / den


def closest_point_on_segment(p, a, b) -> Point:
    t = project_param(p, a, b)
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return Point(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def dist_point_segment(p, a, b) -> Tuple[float, Point]:
    w = closest_point_on_segment(p, a, b)
    return dist(p, w), w


def dist_point_chain(p, chain: Sequence) -> Tuple[float, Point]:
    """Distance from p to a polyline, with the witness closest point."""
    if len(chain) == 1:
        return dist(p, chain[0]), pt(chain[0])
    best = math.inf
    witness = pt(chain[0])
    for i in range(len(chain) - 1):
        d, w = dist_point_segment(p, chain[i], chain[i + 1])
        if d < best:
            best, witness = d, w
    return best, witness


def dist_segment_segment(a, b, c, d) -> Tuple[float, Point, Point]:
    """Min distance between closed segments, with witness points (on ab, on cd)."""
    if segments_intersect(a, b, c, d):
        # Any common point will do as witness; compute via params when transversal.
        pr = seg_intersection_params(a, b, c, d)
        if pr is not None:
            t = min(1.0, max(0.0, pr[0]))
            w = Point(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            return 0.0, w, w
        # Collinear overlap: use the closest endpoint pair.
    best = math.inf
    wa = wb = pt(a)
    for p, (u, v), flip in ((c, (a, b), True), (d, (a, b), True),
                            (a, (c, d), False), (b, (c, d), False)):
        dd, w = dist_point_segment(p, u, v)
        if dd < best:
            best = dd
            if flip:
                wa, wb = w, pt(p)
            else:
                wa, wb = pt(p), w
    return best, wa, wb


def dist_chain_chain(chain1: Sequence, chain2: Sequence) -> Tuple[float, Point, Point]:
    best = math.inf
    w1 = w2 = pt(chain1[0])
    segs1 = list(zip(chain1[:-1], chain1[1:])) or [(chain1[0], chain1[0])]
    segs2 = list(zip(chain2[:-1], chain2[1:])) or [(chain2[0], chain2[0])]
    for a, b in segs1:
        for c, d in segs2:
            dd, p1, p2 = dist_segment_segment(a, b, c, d)
            if dd < best:
                best, w1, w2 = dd, p1, p2
    return best, w1, w2


# ---------------------------------------------------------------------------
# rings and polygons

def ring_area(ring: Sequence) -> float:
    s = 0.0
    n = len(ring)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        s += a[0] * b[1] - b[0] * a[1]
    return 0.5 * s


def is_ccw(ring: Sequence) -> bool:
    return ring_area(ring) > 0.0


def ring_is_simple(ring: Sequence) -> bool:
    """O(n^2) check that the closed ring has no self-intersections."""
    n = len(ring)
    if n < 3:
        return False
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if a[0] == b[0] and a[1] == b[1]:
            return False
        for j in range(i + 1, n):
            c, d = ring[j], ring[(j + 1) % n]
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            if adjacent:
                # Shared endpoint allowed; any further overlap is not.
                if segments_overlap_collinear(a, b, c, d):
                    return False
                continue
            if segments_intersect(a, b, c, d):
                return False
    return True


def point_in_ring(p, ring: Sequence) -> int:
    """+1 strictly inside, 0 on the boundary, -1 strictly outside (any ring orientation)."""
    n = len(ring)
    for i in range(n):
        if on_segment(p, ring[i], ring[(i + 1) % n]):
            return 0
    inside = False
    px, py = p[0], p[1]
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if (a[1] > py) != (b[1] > py):
            # Exact side test against the edge, oriented upward.
            if a[1] < b[1]:
                o = orientation(a, b, p)
            else:
                o = orientation(b, a, p)
            if o > 0:
                inside = not inside
    return 1 if inside else -1


def polyline_is_simple(chain: Sequence) -> bool:
    n = len(chain)
    for i in range(n - 1):
        a, b = chain[i], chain[i + 1]
        if a[0] == b[0] and a[1] == b[1]:
            return False
        for j in range(i + 1, n - 1):
            c, d = chain[j], chain[j + 1]
            if j == i + 1:
                if segments_overlap_collinear(a, b, c, d):
                    return False
                continue
            if segments_intersect(a, b, c, d):
                return False
    return True


# ---------------------------------------------------------------------------
# circles

def circle_segment_intersections(center, r: float, a, b) -> List[float]:
    """Params t in [0,1] where segment a+t(b-a) meets the circle."""
    ax, ay = a[0] - center[0], a[1] - center[1]
    dx, dy = b[0] - a[0], b[1] - a[1]
    A = dx * dx + dy * dy
    if A == 0.0:
        return []
    B = 2.0 * (ax * dx + ay * dy)
    C = ax * ax + ay * ay - r * r
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    out = []
    for t in ((-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)):
        if -1e-12 <= t <= 1.0 + 1e-12:
            out.append(min(1.0, max(0.0, t)))
    return sorted(set(out))


def circle_circle_intersections(c1, r1: float, c2, r2: float) -> List[Point]:
    d = dist(c1, c2)
    if d == 0.0 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    h2 = r1 * r1 - a * a
    if h2 < 0.0:
        if h2 < -1e-9 * r1 * r1:
            return []
        h2 = 0.0
    h = math.sqrt(h2)
    ux, uy = (c2[0] - c1[0]) / d, (c2[1] - c1[1]) / d
    mx, my = c1[0] + a * ux, c1[1] + a * uy
    if h == 0.0:
        return [Point(mx, my)]
    return [Point(mx - h * uy, my + h * ux), Point(mx + h * uy, my - h * ux)]


def angle_of(center, p) -> float:
    return math.atan2(p[1] - center[1], p[0] - center[0])


def norm_angle(t: float) -> float:
    """Normalize to [0, 2*pi)."""
    t = math.fmod(t, TWO_PI)
    return t + TWO_PI if t < 0.0 else t


def ccw_span(t0: float, t1: float) -> float:
    """CCW angular distance from t0 to t1 in [0, 2*pi)."""
    return norm_angle(t1 - t0)


def tangent_points_from_point(p, center, r: float) -> List[Point]:
    """Tangent contact points on circle (center, r) for tangents through p."""
    d2 = (p[0] - center[0]) ** 2 + (p[1] - center[1]) ** 2
    r2 = r * r
    if d2 < r2:
        return []
    d = math.sqrt(d2)
    if d == r:
        return [pt(p)]
    # Contact points lie on the circle at angle +-alpha from the direction to p.
    base = math.atan2(p[1] - center[1], p[0] - center[0])
    alpha = math.acos(r / d)
    return [Point(center[0] + r * math.cos(base + s * alpha),
                  center[1] + r * math.sin(base + s * alpha)) for s in (+1.0, -1.0)]


def common_tangents(c1, r1: float, c2, r2: float) -> List[Tuple[Point, Point]]:
    """All common tangent segments (contact on circle1, contact on circle2)."""
    out: List[Tuple[Point, Point]] = []
    dx, dy = c2[0] - c1[0], c2[1] - c1[1]
    d2 = dx * dx + dy * dy
    if d2 == 0.0:
        return out
    for sign2 in (+1.0, -1.0):  # external (+) and internal (-) families
        rr = r2 * sign2
        dr = r1 - rr
        disc = d2 - dr * dr
        if disc < 0.0:
            continue
        sq = math.sqrt(disc)
        for sgn in (+1.0, -1.0):
            # Unit normal of the tangent line: solves n.(c2-c1) = r1 - rr.
            nx = (dx * dr - sgn * dy * sq) / d2
            ny = (dy * dr + sgn * dx * sq) / d2
            p1 = Point(c1[0] - r1 * nx, c1[1] - r1 * ny)
            p2 = Point(c2[0] - rr * nx, c2[1] - rr * ny)
            out.append((p1, p2))
    return out


# ---------------------------------------------------------------------------
# splinegon pieces (segments + circular arcs)

class SegPiece(NamedTuple):
    p0: Point
    p1: Point

    @property
    def kind(self) -> str:
        return "seg"

    def length(self) -> float:
        return dist(self.p0, self.p1)

    def point_at(self, t: float) -> Point:
        return Point(self.p0.x + t * (self.p1.x - self.p0.x),
                     self.p0.y + t * (self.p1.y - self.p0.y))

    def midpoint(self) -> Point:
        return self.point_at(0.5)

    def reversed(self) -> "SegPiece":
        return SegPiece(self.p1, self.p0)


class ArcPiece(NamedTuple):
    center: Point
    r: float
    t0: float        # start angle
    span: float      # signed: positive CCW, negative CW
    tag: object = None   # feature id (e.g. chain vertex index)

    @property
    def kind(self) -> str:
        return "arc"

    @property
    def p0(self) -> Point:
        return Point(self.center.x + self.r * math.cos(self.t0),
                     self.center.y + self.r * math.sin(self.t0))

    @property
    def p1(self) -> Point:
        t1 = self.t0 + self.span
        return Point(self.center.x + self.r * math.cos(t1),
                     self.center.y + self.r * math.sin(t1))

    def length(self) -> float:
        return abs(self.span) * self.r

    def point_at(self, t: float) -> Point:
        ang = self.t0 + t * self.span
        return Point(self.center.x + self.r * math.cos(ang),
                     self.center.y + self.r * math.sin(ang))

    def midpoint(self) -> Point:
        return self.point_at(0.5)

    def reversed(self) -> "ArcPiece":
        return ArcPiece(self.center, self.r, self.t0 + self.span, -self.span, self.tag)


Piece = object  # SegPiece | ArcPiece


def splinegon_area(loop: Sequence) -> float:
    """Signed area of a closed loop of SegPiece/ArcPiece (CCW positive)."""
    s = 0.0
    for piece in loop:
        a, b = piece.p0, piece.p1
        s += a.x * b.y - b.x * a.y
    s *= 0.5
    for piece in loop:
        if piece.kind == "arc":
            # Circular-segment correction relative to the chord.
            s += 0.5 * piece.r * piece.r * (piece.span - math.sin(piece.span))
    return s


def splinegon_length(loop: Sequence) -> float:
    return sum(p.length() for p in loop)


# ---------------------------------------------------------------------------
# offset of a polyline by a disk (Minkowski sum boundary)

def _merge_collinear(chain: List[Point]) -> List[Point]:
    out = [chain[0]]
    for p in chain[1:]:
        if out and p == out[-1]:
            continue
        out.append(p)
    if len(out) < 3:
        return out
    merged = [out[0]]
    for i in range(1, len(out) - 1):
        if orientation(out[i - 1], out[i], out[i + 1]) != 0:
            merged.append(out[i])
        else:
            # Drop only interior points of a straight run, not reversals.
            d1 = (out[i][0] - out[i - 1][0], out[i][1] - out[i - 1][1])
            d2 = (out[i + 1][0] - out[i][0], out[i + 1][1] - out[i][1])
            if d1[0] * d2[0] + d1[1] * d2[1] <= 0:
                merged.append(out[i])
    merged.append(out[-1])
    return merged


def _quant(p: Point, q: float) -> Tuple[int, int]:
    return (round(p.x / q), round(p.y / q))


def offset_chain(chain: Sequence, r: float, eps: float = 1e-9) -> List[List[Piece]]:
    """Boundary of {x : dist(x, chain) <= r} as closed splinegon loops.

    Loops are oriented with the offset region on the left (outer loops CCW,
    enclosed free pockets CW). Arc pieces carry the chain-vertex index as tag.
    """
    if r <= 0.0:
        raise ValueError("offset radius must be positive")
    chain = [_pt_named(p) for p in chain]
    if len(chain) > 1:
        chain = _merge_collinear(chain)
    if len(chain) == 1:
        c = chain[0]
        return [[ArcPiece(c, r, 0.0, TWO_PI, 0)]]

    scale = max(max(abs(p.x), abs(p.y)) for p in chain) + r
    tol = eps * max(scale, 1.0)
    match_tol = 1e-6 * max(scale, 1.0)

    verts = chain
    edges = [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]

    # Candidate curves: per-vertex circles, and two offset sides per edge.
    circle_splits: List[List[float]] = [[] for _ in verts]     # angles
    seg_candidates: List[Tuple[Point, Point]] = []
    for ei, (a, b) in enumerate(edges):
        d = dist(a, b)
        nx, ny = -(b.y - a.y) / d, (b.x - a.x) / d  # left normal
        left = (Point(b.x + r * nx, b.y + r * ny), Point(a.x + r * nx, a.y + r * ny))
        right = (Point(a.x - r * nx, a.y - r * ny), Point(b.x - r * nx, b.y - r * ny))
        seg_candidates.append(left)    # oriented region-left
        seg_candidates.append(right)
        # Offset endpoints are tangency points on the end circles; register
        # them explicitly (numeric intersection may miss exact tangencies).
        ang = math.atan2(ny, nx)
        circle_splits[ei] += [ang, ang + math.pi]
        circle_splits[ei + 1] += [ang, ang + math.pi]
    seg_splits: List[List[float]] = [[0.0, 1.0] for _ in seg_candidates]

    # Split circles against circles.
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            for p in circle_circle_intersections(verts[i], r, verts[j], r):
                circle_splits[i].append(angle_of(verts[i], p))
                circle_splits[j].append(angle_of(verts[j], p))
    # Split circles against candidate segments and vice versa.
    for i, c in enumerate(verts):
        for k, (a, b) in enumerate(seg_candidates):
            for t in circle_segment_intersections(c, r, a, b):
                seg_splits[k].append(t)
                p = Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
                circle_splits[i].append(angle_of(c, p))
    # Segment-segment splits.
    for k1 in range(len(seg_candidates)):
        a, b = seg_candidates[k1]
        for k2 in range(k1 + 1, len(seg_candidates)):
            c, d = seg_candidates[k2]
            pr = seg_intersection_params(a, b, c, d)
            if pr is None:
                continue
            t, u = pr
            if -1e-12 <= t <= 1 + 1e-12 and -1e-12 <= u <= 1 + 1e-12:
                seg_splits[k1].append(min(1.0, max(0.0, t)))
                seg_splits[k2].append(min(1.0, max(0.0, u)))

    def on_boundary(p: Point) -> bool:
        d, _ = dist_point_chain(p, chain)
        return d >= r - max(tol, 1e-9 * r)

    ang_tol = match_tol / max(r, 1e-12)
    pieces: List[Piece] = []
    for i, c in enumerate(verts):
        angles = _cluster_sorted([norm_angle(t) for t in circle_splits[i]], ang_tol)
        if len(angles) >= 2 and angles[0] + TWO_PI - angles[-1] <= ang_tol:
            angles.pop()
        if not angles:
            pieces.append(ArcPiece(c, r, 0.0, TWO_PI, i))
            if not on_boundary(pieces[-1].midpoint()):
                pieces.pop()
            continue
        m = len(angles)
        for k in range(m):
            t0 = angles[k]
            t1 = angles[(k + 1) % m]
            span = ccw_span(t0, t1) if m > 1 else TWO_PI
            if span * r <= match_tol:
                continue
            piece = ArcPiece(c, r, t0, span, i)
            if on_boundary(piece.midpoint()):
                pieces.append(piece)
    for k, (a, b) in enumerate(seg_candidates):
        seg_len = dist(a, b)
        ts = _cluster_sorted([min(1.0, max(0.0, t)) for t in seg_splits[k]],
                             match_tol / max(seg_len, 1e-12))
        if not ts or ts[0] > 0.0:
            ts = [0.0] + ts
        if ts[-1] < 1.0:
            ts = ts + [1.0]
        for t0, t1 in zip(ts[:-1], ts[1:]):
            if (t1 - t0) * seg_len <= match_tol:
                continue
            p0 = Point(a.x + t0 * (b.x - a.x), a.y + t0 * (b.y - a.y))
            p1 = Point(a.x + t1 * (b.x - a.x), a.y + t1 * (b.y - a.y))
            piece = SegPiece(p0, p1)
            if on_boundary(piece.midpoint()):
                pieces.append(piece)

    # Deduplicate coincident pieces (collinear chain geometry can double them).
    seen = set()
    unique: List[Piece] = []
    for piece in pieces:
        key = (_quant(piece.p0, match_tol), _quant(piece.p1, match_tol),
               piece.kind, _quant(piece.midpoint(), match_tol))
        if key in seen:
            continue
        seen.add(key)
        unique.append(piece)
    pieces = unique

    return _chain_pieces(pieces, match_tol)


def _cluster_sorted(vals: List[float], tol: float) -> List[float]:
    """Sort and merge values closer than tol (returns representatives)."""
    if not vals:
        return []
    vals = sorted(vals)
    out = [vals[0]]
    for v in vals[1:]:
        if v - out[-1] > tol:
            out.append(v)
    return out


def _pt_named(p) -> Point:
    return p if isinstance(p, Point) else Point(float(p[0]), float(p[1]))


def _piece_dir_out(piece: Piece) -> Tuple[float, float]:
    """Unit tangent at the start of the piece, in traversal direction."""
    if piece.kind == "seg":
        d = dist(piece.p0, piece.p1)
        return ((piece.p1.x - piece.p0.x) / d, (piece.p1.y - piece.p0.y) / d)
    ang = piece.t0
    s = 1.0 if piece.span > 0 else -1.0
    return (-s * math.sin(ang), s * math.cos(ang))


def _piece_dir_in(piece: Piece) -> Tuple[float, float]:
    """Unit tangent at the end of the piece, in traversal direction."""
    if piece.kind == "seg":
        d = dist(piece.p0, piece.p1)
        return ((piece.p1.x - piece.p0.x) / d, (piece.p1.y - piece.p0.y) / d)
    ang = piece.t0 + piece.span
    s = 1.0 if piece.span > 0 else -1.0
    return (-s * math.sin(ang), s * math.cos(ang))


def _chain_pieces(pieces: List[Piece], match_tol: float) -> List[List[Piece]]:
    """Assemble oriented pieces into closed loops (rightmost-turn at junctions)."""
    if not pieces:
        return []
    used = [False] * len(pieces)
    loops: List[List[Piece]] = []
    for seed in range(len(pieces)):
        if used[seed]:
            continue
        loop = [pieces[seed]]
        used[seed] = True
        closed = dist(pieces[seed].p1, pieces[seed].p0) <= match_tol
        guard = 0
        while not closed and guard < 4 * len(pieces):
            guard += 1
            end = loop[-1].p1
            if len(loop) > 1 and dist(end, loop[0].p0) <= match_tol:
                closed = True
                break
            cands = [i for i in range(len(pieces))
                     if not used[i] and dist(pieces[i].p0, end) <= match_tol]
            if not cands:
                break
            if len(cands) == 1:
                nxt = cands[0]
            else:
                # Rightmost turn keeps the region on the left at tangencies.
                din = _piece_dir_in(loop[-1])
                base = math.atan2(din[1], din[0])

                def turn(i: int) -> float:
                    dout = _piece_dir_out(pieces[i])
                    return norm_angle(math.atan2(dout[1], dout[0]) - base + math.pi)

                nxt = min(cands, key=turn)
            loop.append(pieces[nxt])
            used[nxt] = True
            if dist(pieces[nxt].p1, loop[0].p0) <= match_tol:
                closed = True
        if closed:
            loops.append(loop)
    return loops

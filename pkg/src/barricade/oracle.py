"""Brute-force ground truth: exhaustive angle grids over vertex roots with
local refinement, free-placement sampling, exhaustive flow assignments, and a
raster connectivity check for blockage decisions.

Oracle values are deterministic for a fixed config and are meant to be frozen
into test fixtures before tuning the real optimizers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .blockage import legal_min_chain_distance
from .domain import PolygonalDomain
from .geometry import Point, Segment, dist, norm_angle
from .results import FlowSolution, PlacementSolution
from .sweep import PathEngine, StickSweep
from .visibility import barrier_blocks, evaluate_barriers

INF = math.inf
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class OracleConfig:
    angle_step_deg: float = 0.1
    refinement_rounds: int = 3
    free_placement_samples: int = 10_000
    seed: int = 0
    joint_step_deg: float = 5.0       # per-stick grid for 2-stick search
    joint_top: int = 12               # incumbents kept for joint refinement

    def __post_init__(self):
        if self.angle_step_deg <= 0 or self.joint_step_deg <= 0:
            raise ValueError("angle steps must be positive")


def _mk_stick(v: Point, theta: float, length: float) -> Segment:
    return Segment(v, Point(v.x + length * math.cos(theta),
                            v.y + length * math.sin(theta)))


def oracle_path(domain: PolygonalDomain, lengths: Sequence[float],
                cfg: OracleConfig = OracleConfig()) -> PlacementSolution:
    """Exhaustive-search optimum for one or two sticks (desk scale)."""
    lengths = [float(x) for x in lengths]
    if len(lengths) == 1:
        return _oracle_single(domain, lengths[0], cfg)
    if len(lengths) == 2:
        return _oracle_joint2(domain, lengths, cfg)
    raise ValueError("oracle_path handles at most 2 sticks")


def _chain_samples(chain: List[Point], step: float) -> List[Point]:
    out = [chain[0]]
    for a, b in zip(chain[:-1], chain[1:]):
        L = dist(a, b)
        k = max(1, int(math.ceil(L / step)))
        for i in range(1, k + 1):
            out.append(Point(a.x + (b.x - a.x) * i / k, a.y + (b.y - a.y) * i / k))
    return out


def _oracle_blocked_scan(domain: PolygonalDomain, length: float) -> Optional[Segment]:
    """Independent blockage check: dense chain-pair sampling with refinement."""
    step = domain.diameter() / 400.0
    bot = _chain_samples(domain.bottom_chain(), step)
    top = _chain_samples(domain.top_chain(), step)
    bx = np.array([[p.x, p.y] for p in bot])
    tx = np.array([[p.x, p.y] for p in top])
    from .blockage import extend_witness
    best_legal: Optional[Tuple[int, int]] = None
    for _ in range(4):
        d2 = ((bx[:, None, :] - tx[None, :, :]) ** 2).sum(axis=2)
        order = np.argsort(d2, axis=None)
        best_legal = None
        for flat in order[:20000]:
            i, j = divmod(int(flat), tx.shape[0])
            dd = math.sqrt(float(d2[i, j]))
            if dd > length:
                break
            wit = Segment(Point(*bx[i]), Point(*tx[j]))
            if wit.length() == 0.0 or not domain.stick_is_legal([wit]):
                continue
            over = min(1e-9 * (1.0 + domain.diameter()), 0.49 * (length - dd))
            ext = extend_witness(wit, over) if over > 0.0 else wit
            if not domain.stick_is_legal([ext]):
                ext = wit
            if barrier_blocks(domain, [ext]):
                return ext
            if best_legal is None:
                best_legal = (i, j)
        if best_legal is None:
            # Nothing within reach even before legality: refine only if close.
            i, j = divmod(int(order[0]), tx.shape[0])
            if math.sqrt(float(d2[i, j])) > length * 1.25:
                return None
        else:
            i, j = best_legal
        step /= 8.0
        bx = _local_resample(bx, i, step)
        tx = _local_resample(tx, j, step)
    return None


def _local_resample(arr: np.ndarray, k: int, step: float) -> np.ndarray:
    lo = max(0, k - 1)
    hi = min(arr.shape[0] - 1, k + 1)
    pts = [arr[lo]]
    for a, b in zip(arr[lo:hi], arr[lo + 1:hi + 1]):
        L = float(np.hypot(*(b - a)))
        m = max(1, int(math.ceil(L / step)))
        for i in range(1, m + 1):
            pts.append(a + (b - a) * i / m)
    return np.array(pts)


def _oracle_single(domain: PolygonalDomain, length: float,
                   cfg: OracleConfig) -> PlacementSolution:
    eng = PathEngine(domain)
    baseline = float(eng.distances(eng.s_idx, frozenset())[eng.t_idx])
    if length <= 0.0:
        root = eng.nodes[eng.root_ids[0]]
        return PlacementSolution([Segment(root, root)], baseline, [root],
                                 certificate=evaluate_barriers(domain, []),
                                 algorithm="oracle-path")
    wit = _oracle_blocked_scan(domain, length)
    if wit is not None:
        return PlacementSolution([wit], INF, [wit.a], blocked_witness=wit,
                                 algorithm="oracle-path")
    blocked_hit: Optional[Tuple[int, float]] = None
    incumbents: List[Tuple[float, int, float, StickSweep]] = []
    for v_idx in eng.root_ids:
        sweep = StickSweep(eng, v_idx, length, cfg.angle_step_deg)
        values, legal = sweep.grid_values()
        finite = legal & np.isfinite(values)
        if (legal & np.isinf(values)).any() and blocked_hit is None:
            for k in np.nonzero(legal & np.isinf(values))[0]:
                theta = float(sweep.thetas[k])
                if math.isinf(eng.stick_objective(v_idx, theta, length)):
                    blocked_hit = (v_idx, theta)
                    break
        if blocked_hit is not None:
            break
        if not finite.any():
            continue
        vals = np.where(finite, values, -INF)
        k = int(vals.argmax())
        incumbents.append((float(vals[k]), v_idx, float(sweep.thetas[k]), sweep))
    best = (-INF, None, None)    # value, root_idx, theta
    if blocked_hit is None and incumbents:
        # Refine the leading roots (grid error at kinks is ~step * slope).
        incumbents.sort(key=lambda t: -t[0])
        lead = incumbents[0][0]
        slack = 4.0 * math.radians(cfg.angle_step_deg) * max(1.0, length)
        for rank, (v0, v_idx, theta0, sweep) in enumerate(incumbents):
            if rank >= 8 and v0 < lead - slack:
                break
            t_ref, v_ref = sweep.refine(theta0, span=2 * math.radians(cfg.angle_step_deg),
                                        rounds=cfg.refinement_rounds)
            if math.isinf(v_ref):
                blocked_hit = (v_idx, t_ref)
                break
            if v_ref > best[0] + 1e-15:
                best = (v_ref, v_idx, t_ref)
    if blocked_hit is not None:
        v_idx, theta = blocked_hit
        stick = _mk_stick(eng.nodes[v_idx], theta, length)
        assert barrier_blocks(domain, [stick])
        return PlacementSolution([stick], INF, [eng.nodes[v_idx]],
                                 blocked_witness=stick, algorithm="oracle-path")
    value, v_idx, theta = best
    stick = _mk_stick(eng.nodes[v_idx], theta, length)
    free_best = _free_placements(domain, length, cfg, value)
    sol = PlacementSolution([stick], value, [eng.nodes[v_idx]],
                            certificate=evaluate_barriers(domain, [stick]),
                            supremum_limited=_near_margin(domain, eng.nodes[v_idx],
                                                          theta, length),
                            algorithm="oracle-path",
                            meta={"baseline": baseline})
    if free_best is not None:
        sol.meta["free_best"] = free_best[0]
        sol.meta["free_barrier"] = free_best[1]
    return sol


def _near_margin(domain: PolygonalDomain, root: Point, theta: float, length: float) -> bool:
    delta = domain.tol.angular_margin_delta
    for k in (0.5, 1.0, 2.0, 3.0):
        for sgn in (+1.0, -1.0):
            if not domain.stick_is_legal([_mk_stick(root, theta + sgn * k * delta, length)]):
                return True
    return False


def _free_placements(domain: PolygonalDomain, length: float, cfg: OracleConfig,
                     incumbent: float) -> Optional[Tuple[float, Segment]]:
    """Best of random non-vertex-rooted placements (rooting falsifier)."""
    if cfg.free_placement_samples <= 0:
        return None
    rng = np.random.default_rng(cfg.seed)
    ring = domain.ring
    xs = [p.x for p in ring]
    ys = [p.y for p in ring]
    best: Tuple[float, Optional[Segment]] = (-INF, None)
    tries = 0
    done = 0
    while done < cfg.free_placement_samples and tries < 50 * cfg.free_placement_samples:
        tries += 1
        p = Point(float(rng.uniform(min(xs), max(xs))),
                  float(rng.uniform(min(ys), max(ys))))
        if domain.contains(p) < 0:
            continue
        theta = float(rng.uniform(0.0, TWO_PI))
        stick = _mk_stick(p, theta, length)
        if not domain.stick_is_legal([stick]):
            continue
        done += 1
        val = evaluate_barriers(domain, [stick]).length
        if val > best[0]:
            best = (val, stick)
    if best[1] is None:
        return None
    return best  # type: ignore[return-value]


def _oracle_joint2(domain: PolygonalDomain, lengths: List[float],
                   cfg: OracleConfig) -> PlacementSolution:
    """Coarse joint grid over two vertex-rooted sticks, then local refinement."""
    eng = PathEngine(domain)
    step = math.radians(cfg.joint_step_deg)
    K = max(8, int(round(TWO_PI / step)))
    thetas = [k * TWO_PI / K for k in range(K)]
    roots = eng.root_ids
    incumbents: List[Tuple[float, Tuple]] = []
    blocked: Optional[List[Segment]] = None
    same = abs(lengths[0] - lengths[1]) < 1e-15

    for i1, v1 in enumerate(roots):
        p1 = eng.nodes[v1]
        for t1 in thetas:
            s1 = _mk_stick(p1, t1, lengths[0])
            if not domain.stick_is_legal([s1]):
                continue
            if domain.contains(s1.b) < 0 and eng.cut_edges_of(s1) == frozenset():
                continue  # stick fully outside: equivalent to absent
            try:
                eng2 = PathEngine(domain, frozen=[s1])
            except ValueError:
                continue
            for i2, v2 in enumerate(roots):
                if same and (i2, 0) < (i1, 0):
                    continue
                sweep = StickSweep(eng2, eng2.nodes.index(eng.nodes[v2]),
                                   lengths[1], math.degrees(step))
                values, legal = sweep.grid_values()
                finite = legal & np.isfinite(values)
                if (legal & np.isinf(values)).any() and blocked is None:
                    for k in np.nonzero(legal & np.isinf(values))[0]:
                        s2 = _mk_stick(eng.nodes[v2], float(sweep.thetas[k]), lengths[1])
                        if domain.stick_is_legal([s1, s2]) and \
                                barrier_blocks(domain, [s1, s2]):
                            blocked = [s1, s2]
                            break
                if blocked:
                    break
                if finite.any():
                    vals = np.where(finite, values, -INF)
                    k = int(vals.argmax())
                    incumbents.append((float(vals[k]), (v1, t1, v2, float(sweep.thetas[k]))))
            if blocked:
                break
        if blocked:
            break
    if blocked:
        return PlacementSolution(blocked, INF, [b.a for b in blocked],
                                 blocked_witness=blocked[0], algorithm="oracle-path-joint")
    incumbents.sort(key=lambda t: -t[0])
    best_val, best_cfg = incumbents[0]
    for val, (v1, t1, v2, t2) in incumbents[:cfg.joint_top]:
        rv, rcfg = _joint_refine(domain, eng, lengths, (v1, t1, v2, t2), step,
                                 cfg.refinement_rounds)
        if rv > best_val:
            best_val, best_cfg = rv, rcfg
    v1, t1, v2, t2 = best_cfg
    sticks = [_mk_stick(eng.nodes[v1], t1, lengths[0]),
              _mk_stick(eng.nodes[v2], t2, lengths[1])]
    cert = evaluate_barriers(domain, sticks)
    return PlacementSolution(sticks, best_val, [eng.nodes[v1], eng.nodes[v2]],
                             certificate=cert, algorithm="oracle-path-joint")


def _joint_refine(domain, eng, lengths, cfg0, step, rounds) -> Tuple[float, Tuple]:
    v1, t1, v2, t2 = cfg0
    span = step

    def value(a1, a2) -> float:
        sticks = [_mk_stick(eng.nodes[v1], a1, lengths[0]),
                  _mk_stick(eng.nodes[v2], a2, lengths[1])]
        if not domain.stick_is_legal(sticks):
            return -INF
        gp = evaluate_barriers(domain, sticks)
        return gp.length if math.isfinite(gp.length) else -INF

    best = (value(t1, t2), t1, t2)
    for _ in range(rounds):
        ts1 = best[1] + np.linspace(-span, span, 7)
        ts2 = best[2] + np.linspace(-span, span, 7)
        for a1 in ts1:
            for a2 in ts2:
                val = value(float(a1), float(a2))
                if val > best[0] + 1e-15:
                    best = (val, float(a1), float(a2))
        span /= 4.0
    return best[0], (v1, best[1], v2, best[2])


# ---------------------------------------------------------------------------
# flow oracle: exhaustive partitions x edge assignments

def _set_partitions(items: List[float]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [part[k] + [first]] + part[k + 1:]
        yield part + [[first]]


def oracle_flow(graph, lengths: Sequence[float]) -> FlowSolution:
    """Exhaustive minimum over stick partitions and edge assignments."""
    lengths = [float(x) for x in lengths]
    edges = graph.edge_list()
    base_val, base_path = _brute_shortest(graph, {})
    best = (base_val, base_path, {})
    for part in _set_partitions(lengths):
        groups = [sum(g) for g in part]
        for assign in itertools.product(range(len(edges)), repeat=len(groups)):
            shorten: Dict[Tuple, float] = {}
            for g, e_ix in zip(groups, assign):
                shorten[edges[e_ix]] = shorten.get(edges[e_ix], 0.0) + g
            val, path = _brute_shortest(graph, shorten)
            if val < best[0] - 1e-15:
                best = (val, path, dict(shorten))
    placements = [{"edge": e, "offset": 0.0, "length": L} for e, L in best[2].items()]
    return FlowSolution(base_val, best[0], best[1], placements, algorithm="oracle-flow")


def _brute_shortest(graph, shorten: Dict) -> Tuple[float, List]:
    """Min B-T path value by DFS enumeration of simple paths (dumb on purpose)."""
    nodes = graph.node_list()
    best = [INF, []]

    def w(u, v) -> float:
        L = graph.weight(u, v)
        cut = shorten.get((u, v), 0.0) + shorten.get((v, u), 0.0)
        return max(0.0, L - cut)

    def dfs(u, seen, acc, path):
        if acc >= best[0]:
            return
        if u == "T":
            best[0] = acc
            best[1] = list(path)
            return
        for v in nodes:
            if v == u or v in seen or v == "B":
                continue
            if graph.weight(u, v) is None:
                continue
            seen.add(v)
            path.append(v)
            dfs(v, seen, acc + w(u, v), path)
            path.pop()
            seen.remove(v)

    dfs("B", {"B"}, 0.0, ["B"])
    return best[0], best[1]


# ---------------------------------------------------------------------------
# raster reachability

def raster_reachability(domain: PolygonalDomain, length: float,
                        grid: int = 1024) -> Dict:
    """Grid flood-fill test of s-t connectivity outside the fattened chain.

    Returns {"connected": bool | None, "abstained": bool, "clearance": float}.
    Abstains when the legal chain clearance is within two grid cells of the
    stick length (the decision is below raster resolution there).
    """
    from scipy import ndimage

    clearance, _, _ = legal_min_chain_distance(domain)
    xs = [p.x for p in domain.ring]
    ys = [p.y for p in domain.ring]
    pad = 0.01 * domain.diameter()
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    cell = max(x1 - x0, y1 - y0) / grid
    if abs(clearance - length) <= 2.0 * cell * math.sqrt(2.0):
        return {"connected": None, "abstained": True, "clearance": clearance}

    gx = np.linspace(x0 + cell / 2, x1 - cell / 2, grid)
    gy = np.linspace(y0 + cell / 2, y1 - cell / 2, grid)
    X, Y = np.meshgrid(gx, gy)

    inside = _points_in_ring_mask(X, Y, domain.ring)
    for h in domain.holes:
        inside &= ~_points_in_ring_mask(X, Y, h)

    chain = domain.bottom_chain()
    dmin = np.full(X.shape, np.inf)
    for a, b in zip(chain[:-1], chain[1:]):
        vx, vy = b.x - a.x, b.y - a.y
        L2 = vx * vx + vy * vy
        if L2 == 0.0:
            continue
        t = np.clip(((X - a.x) * vx + (Y - a.y) * vy) / L2, 0.0, 1.0)
        d = np.hypot(X - (a.x + t * vx), Y - (a.y + t * vy))
        dmin = np.minimum(dmin, d)
    free = inside & (dmin > length)

    labels, _ = ndimage.label(free)

    def cell_label(p: Point) -> int:
        j = int(np.clip(round((p.x - gx[0]) / cell), 0, grid - 1))
        i = int(np.clip(round((p.y - gy[0]) / cell), 0, grid - 1))
        return int(labels[i, j])

    from .blockage import crack_exit
    starts = []
    for gap in (domain.gap_s, domain.gap_t):
        x0p, d0 = crack_exit(domain, "bottom", gap, length)
        ux, uy = gap.line_dir_to_t()
        # Nudge past the exit until the raster sees a free cell.
        lab = 0
        for extra in np.linspace(0.5 * cell, 6 * cell, 12):
            probe = Point(x0p.x + extra * ux, x0p.y + extra * uy)
            lab = cell_label(probe)
            if lab != 0:
                break
        starts.append(lab)
    if starts[0] == 0 or starts[1] == 0:
        return {"connected": None, "abstained": True, "clearance": clearance}
    return {"connected": starts[0] == starts[1], "abstained": False,
            "clearance": clearance}


def _points_in_ring_mask(X: np.ndarray, Y: np.ndarray, ring: Sequence[Point]) -> np.ndarray:
    inside = np.zeros(X.shape, dtype=bool)
    n = len(ring)
    for k in range(n):
        a, b = ring[k], ring[(k + 1) % n]
        cond = (a.y > Y) != (b.y > Y)
        denom = b.y - a.y
        if denom == 0.0:
            continue
        xint = a.x + (Y - a.y) * (b.x - a.x) / denom
        inside ^= cond & (X < xint)
    return inside

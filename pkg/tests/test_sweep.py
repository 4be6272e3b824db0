import math

import numpy as np
import pytest

from barricade.domain import PolygonalDomain
from barricade.geometry import Point, Segment, dist
from barricade.instances import gen_random_simple, gen_random_with_holes
from barricade.sweep import PathEngine, StickSweep
from barricade.visibility import evaluate_barriers

CORRIDOR = PolygonalDomain.path([(0, 0), (10, 0), (10, 5), (0, 5)],
                                s=(0, 2.5), t=(10, 2.5), eps_gap=1e-4)


def stick_at(v, theta, length):
    return Segment(v, Point(v.x + length * math.cos(theta), v.y + length * math.sin(theta)))


def test_engine_baseline_distance():
    eng = PathEngine(CORRIDOR)
    ds = eng.distances(eng.s_idx, frozenset())
    assert ds[eng.t_idx] == pytest.approx(10.0, abs=1e-9)


def test_scalar_matches_reference_corridor():
    eng = PathEngine(CORRIDOR)
    v_idx = eng.nodes.index(Point(0.0, 0.0))
    for theta_deg in (10, 45, 60, 90, 120, 170, 200, 300):
        theta = math.radians(theta_deg)
        got = eng.stick_objective(v_idx, theta, 1.0)
        if math.isnan(got):
            continue
        want = evaluate_barriers(CORRIDOR, [stick_at(Point(0, 0), theta, 1.0)]).length
        assert got == pytest.approx(want, abs=1e-9), theta_deg


def test_scalar_matches_reference_random():
    rng = np.random.default_rng(77)
    for trial in range(4):
        d = gen_random_simple(int(rng.integers(8, 16)), seed=900 + trial)
        eng = PathEngine(d)
        length = 0.6 * float(rng.uniform(0.5, 2.0))
        checked = 0
        for v_idx in range(len(eng.nodes)):
            for theta in rng.uniform(0, 2 * math.pi, size=3):
                got = eng.stick_objective(v_idx, float(theta), length)
                if math.isnan(got):
                    continue
                stick = stick_at(eng.nodes[v_idx], float(theta), length)
                want = evaluate_barriers(d, [stick]).length
                assert got == pytest.approx(want, abs=1e-9), (trial, v_idx, theta)
                checked += 1
        assert checked > 20


def test_scalar_matches_reference_with_holes():
    rng = np.random.default_rng(5)
    d = gen_random_with_holes(12, holes=2, seed=31)
    eng = PathEngine(d)
    checked = 0
    for v_idx in range(0, len(eng.nodes), 2):
        for theta in rng.uniform(0, 2 * math.pi, size=3):
            got = eng.stick_objective(v_idx, float(theta), 0.8)
            if math.isnan(got):
                continue
            stick = stick_at(eng.nodes[v_idx], float(theta), 0.8)
            want = evaluate_barriers(d, [stick]).length
            assert got == pytest.approx(want, abs=1e-9), (v_idx, theta)
            checked += 1
    assert checked > 15


def test_grid_matches_scalar():
    rng = np.random.default_rng(3)
    d = gen_random_simple(12, seed=404)
    eng = PathEngine(d)
    length = 0.9
    for v_idx in (0, 3, 7, 11):
        sweep = StickSweep(eng, v_idx, length, step_deg=3.0)
        values, legal = sweep.grid_values()
        for k in range(0, sweep.K, 7):
            if not legal[k]:
                continue
            want = eng.stick_objective(v_idx, float(sweep.thetas[k]), length)
            if math.isnan(want):
                continue
            got = values[k]
            if math.isinf(want):
                assert math.isinf(got), (v_idx, k)
            else:
                assert got == pytest.approx(want, abs=1e-9), (v_idx, k)


def test_blocked_angles_are_inf():
    # Corridor of height 1.2 with stick length 2: vertical placements block.
    d = PolygonalDomain.path([(0, 0), (10, 0), (10, 1.2), (0, 1.2)],
                             s=(0, 0.6), t=(10, 0.6), eps_gap=1e-4)
    eng = PathEngine(d)
    v_idx = eng.nodes.index(Point(5.0, 0.0)) if Point(5.0, 0.0) in eng.nodes else None
    # No mid vertex on the floor; use a corner and aim diagonally across.
    v_idx = eng.nodes.index(Point(0.0, 0.0))
    val = eng.stick_objective(v_idx, math.radians(45.0), 2.0)
    assert math.isinf(val)
    # Witness confirmed by the contact test.
    from barricade.visibility import barrier_blocks
    assert barrier_blocks(d, [stick_at(Point(0, 0), math.radians(45), 2.0)])

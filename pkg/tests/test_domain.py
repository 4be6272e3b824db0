import math

import pytest

from barricade.domain import PolygonalDomain, ToleranceConfig, validate_domain
from barricade.geometry import Point, Segment, dist

SQUARE = [(0, 0), (10, 0), (10, 5), (0, 5)]


def make_corridor(eps_gap=1e-3):
    return PolygonalDomain.path(SQUARE, s=(0, 2.5), t=(10, 2.5), eps_gap=eps_gap)


def test_validate_square_ok():
    d = make_corridor()
    assert validate_domain(d) == []


def test_validate_self_crossing():
    bow = [(0, 0), (2, 2), (2, 0), (0, 2)]
    d = PolygonalDomain.flow(bow, source_edge=0, sink_edge=2)
    assert "outer not simple" in validate_domain(d)


def test_validate_hole_not_interior():
    hole = [(9, 2), (9, 4), (12, 4), (12, 2)]  # pokes outside (cw)
    d = PolygonalDomain.flow(SQUARE, source_edge=3, sink_edge=1, holes=[hole])
    assert any("not strictly interior" in v for v in validate_domain(d))


def test_gap_vertices_and_chains():
    eps = 1e-3
    d = make_corridor(eps)
    s_minus = d.ring[d.gap_s.minus_idx]
    s_plus = d.ring[d.gap_s.plus_idx]
    assert s_minus.x == 0.0 and s_minus.y == pytest.approx(2.5 - eps / 2)
    assert s_plus.x == 0.0 and s_plus.y == pytest.approx(2.5 + eps / 2)
    assert dist(s_minus, s_plus) == pytest.approx(eps)
    bottom = d.bottom_chain()
    top = d.top_chain()
    # Bottom runs from s- across the floor to t-; top from t+ back to s+.
    assert bottom[0] == s_minus
    assert bottom[-1].x == 10.0 and bottom[-1].y == pytest.approx(2.5 - eps / 2)
    assert Point(0.0, 0.0) in bottom and Point(10.0, 0.0) in bottom
    assert top[0].x == 10.0 and top[0].y == pytest.approx(2.5 + eps / 2)
    assert top[-1] == s_plus
    assert Point(0.0, 5.0) in top and Point(10.0, 5.0) in top
    # Gaps belong to neither chain.
    assert d.s not in bottom and d.s not in top


def test_contains():
    d = make_corridor()
    assert d.contains((5, 2.5)) == 1
    assert d.contains((0, 1)) == 0
    assert d.contains((-1, 1)) == -1
    hole = [(4, 2), (4, 3), (6, 3), (6, 2)]
    d2 = PolygonalDomain.path(SQUARE, s=(0, 2.5), t=(10, 2.5), holes=[hole],
                              eps_gap=1e-3)
    assert d2.contains((5, 2.5)) == -1
    assert d2.contains((4, 2.5)) == 0
    assert d2.contains((2, 2.5)) == 1


def test_door_rule_collinear_stick_forbidden():
    d = make_corridor(eps_gap=1e-3)
    shutting = Segment(Point(0.0, 2.0), Point(0.0, 3.0))  # along the left wall over the gap
    assert d.sticks_shut_door([shutting])
    assert not d.stick_is_legal([shutting])
    below = Segment(Point(0.0, 1.0), Point(0.0, 2.4))     # along the wall, below the gap
    assert not d.sticks_shut_door([below])
    perpendicular = Segment(Point(0.0, 2.4995), Point(1.0, 2.4995))
    assert not d.sticks_shut_door([perpendicular])
    assert d.stick_is_legal([perpendicular])


def test_door_rule_angular_margin():
    d = make_corridor(eps_gap=1e-3)
    # Stick pivoted at s-, tilted barely off the wall line: inside the margin.
    eps = 1e-3
    sm = Point(0.0, 2.5 - eps / 2)
    tip = Point(1e-6, 2.5 - eps / 2 + 1.0)
    grazing = Segment(sm, tip)
    assert d.stick_in_gap_margin(grazing)
    assert not d.stick_is_legal([grazing])
    # Clearly transversal stick at the same root is fine.
    honest = Segment(sm, Point(0.7, 3.2))
    assert not d.stick_in_gap_margin(honest)
    assert d.stick_is_legal([honest])


def test_door_rule_stick_chain_through_hole():
    # Two sticks bridged by a hole sealing the gap region is also forbidden.
    hole = [(0.4, 2.0), (0.4, 3.0), (0.9, 3.0), (0.9, 2.0)]
    d = PolygonalDomain.path(SQUARE, s=(0, 2.5), t=(10, 2.5), holes=[hole],
                             eps_gap=1e-3)
    s1 = Segment(Point(0.0, 2.0), Point(0.5, 2.2))   # wall below gap -> hole
    s2 = Segment(Point(0.5, 2.8), Point(0.0, 3.0))   # hole -> wall above gap
    assert d.sticks_shut_door([s1, s2])
    assert not d.sticks_shut_door([s1])


def test_flow_chains():
    d = PolygonalDomain.flow(SQUARE, source_edge=3, sink_edge=1)
    # Source is the left edge, sink the right: bottom chain is the floor.
    assert d.bottom_chain() == [Point(0, 0), Point(10, 0)]
    assert d.top_chain() == [Point(10, 5), Point(0, 5)]


def test_tolerance_config_positive():
    with pytest.raises(ValueError):
        ToleranceConfig(eps_geom=0.0)

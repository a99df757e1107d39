"""Curve straightening on flat surfaces."""

import math

import pytest

from flatel.errors import TrivialCurve, ValidationError
from flatel.geodesics import check_crossings, tighten


def test_cylinder_core_zigzag_straightens(unit_cylinder):
    core = unit_cylinder.named_curves["core"].components[0]
    # Off-center start: the shortest loop is still the straight core.
    g = tighten(unit_cylinder, core.crossings, "loop", (0.13,))
    assert abs(g.length - 2.0) < 1e-9
    assert g.kind == "loop"


def test_doubled_rectangle_boundary_parallel(dr4):
    c1 = dr4.named_curves["C1"].components[0]
    g = tighten(dr4, c1.crossings, "loop", c1.params)
    assert abs(g.length - 2.0) < 1e-9


def test_pillowcase_diagonal_length(pillowcase):
    diag = pillowcase.named_curves["diagonal"].components[0]
    g = tighten(pillowcase, diag.crossings, "loop", diag.params)
    assert abs(g.length - 2.0 * math.sqrt(2.0)) < 1e-9


def test_tighten_idempotent(pillowcase):
    diag = pillowcase.named_curves["diagonal"].components[0]
    g = tighten(pillowcase, diag.crossings, "loop", diag.params)
    again = tighten(pillowcase, g.crossings, "loop", g.params)
    assert abs(again.length - g.length) < 1e-9


def test_trivial_class_raises(pillowcase):
    # Crossing one gluing and coming straight back contracts to a point.
    with pytest.raises(TrivialCurve):
        tighten(pillowcase, ((0, 1), (1, 2)), "loop")


def test_segments_chain_across_edges(unit_cylinder):
    core = unit_cylinder.named_curves["core"].components[0]
    g = tighten(unit_cylinder, core.crossings, "loop", core.params)
    for p, z0, z1 in g.segments:
        assert 0 <= p < len(unit_cylinder.polygons)
        assert abs(z1 - z0) > 0
    assert abs(sum(abs(z1 - z0) for _, z0, z1 in g.segments) - g.length) < 1e-12


def test_straight_direction(unit_cylinder):
    core = unit_cylinder.named_curves["core"].components[0]
    g = tighten(unit_cylinder, core.crossings, "loop", core.params)
    d = g.straight_direction(unit_cylinder)
    assert d is not None
    assert abs(abs(d) - 1.0) < 1e-12
    assert min(abs(d - 1), abs(d + 1)) < 1e-9


def test_check_crossings_rejects_bad_chains(unit_cylinder):
    with pytest.raises(ValidationError):
        check_crossings(unit_cylinder, ((0, 0),), "loop")  # boundary edge
    with pytest.raises(ValidationError):
        check_crossings(unit_cylinder, (), "loop")
    # Arcs must start and end on the boundary.
    with pytest.raises(ValidationError):
        check_crossings(unit_cylinder, ((0, 1), (0, 3)), "arc")


def test_arc_tightening(unit_cylinder):
    # Straight crossing arc of the 2x1 cylinder from bottom to top.
    g = tighten(unit_cylinder, ((0, 0), (0, 2)), "arc", (0.25, 0.25))
    assert abs(g.length - 1.0) < 1e-9

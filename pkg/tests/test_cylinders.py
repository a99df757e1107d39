"""Leaf tracing and cylinder decompositions."""

import math

import pytest

from flatel.cylinders import (
    cylinder_decomposition,
    maximal_embedded_strip,
    trace_closed_leaf,
)
from flatel.errors import Inconclusive, NotPeriodic
from flatel.examples import make_example_surface
from flatel.geodesics import tighten


def test_torus_horizontal_single_cylinder(torus):
    deco = cylinder_decomposition(torus, 1 + 0j)
    assert len(deco.cylinders) == 1
    c = deco.cylinders[0]
    assert abs(c.circumference - 1.0) < 1e-12
    assert abs(c.height - 1.0) < 1e-12


def test_doubled_rectangle_vertical_cylinder(dr4):
    # Direction parallel to the doubled short side: one cylinder around
    # both marked points, circumference 2, height 4.
    deco = cylinder_decomposition(dr4, 1j)
    assert len(deco.cylinders) == 1
    c = deco.cylinders[0]
    assert abs(c.circumference - 2.0) < 1e-12
    assert abs(c.height - 4.0) < 1e-12
    assert abs(c.extremal_length - 0.5) < 1e-12


def test_pillowcase_horizontal(pillowcase):
    deco = cylinder_decomposition(pillowcase, 1 + 0j)
    assert len(deco.cylinders) == 1
    c = deco.cylinders[0]
    assert abs(c.circumference - 2.0) < 1e-12
    assert abs(c.height - 1.0) < 1e-12


def test_decomposition_tiles_area():
    for kind, kwargs, d in [
        ("torus", {}, 1 + 0j),
        ("torus", {}, 1j),
        ("torus", {}, 1 + 1j),
        ("double_rectangle", {"t": 4.0}, 1j),
        ("pillowcase", {}, 1 + 0j),
        ("branched_double", {"t": 4.0}, 1j),
        ("cylinder", {"circumference": 3.0, "height": 0.5}, 1 + 0j),
    ]:
        s = make_example_surface(kind, **kwargs)
        deco = cylinder_decomposition(s, d)
        assert abs(deco.total_area() - s.area) <= 10 * s.tol * max(1.0, s.area), (
            kind,
            d,
        )


def test_irrational_direction_is_inconclusive(torus):
    with pytest.raises((Inconclusive, NotPeriodic)):
        cylinder_decomposition(torus, complex(1.0, math.sqrt(2)), budget=2000)


def test_budget_bites_before_closure(torus):
    # A very long rational direction exhausts a tiny budget first.
    with pytest.raises(Inconclusive):
        cylinder_decomposition(torus, complex(1.0, 997.0 / 1000.0), budget=50)


def test_trace_closed_leaf_roundtrip(unit_cylinder):
    # The traversal length covers the lead-in from the seed point to the
    # first crossing plus one full period of the closed leaf.
    crossings, params, length = trace_closed_leaf(
        unit_cylinder, 0, 1.0 + 0.5j, 1 + 0j
    )
    assert abs(length - 3.0) < 1e-12
    assert len(crossings) == 1
    assert len(params) == len(crossings)
    g = tighten(unit_cylinder, crossings, "loop", params)
    assert abs(g.length - 2.0) < 1e-12


def test_maximal_strip_on_cylinder(unit_cylinder):
    core = unit_cylinder.named_curves["core"].components[0]
    g = tighten(unit_cylinder, core.crossings, "loop", core.params)
    res = maximal_embedded_strip(unit_cylinder, g)
    assert abs(res.width - 1.0) < 1e-9


def test_maximal_strip_on_doubled_rectangle(dr4):
    c1 = dr4.named_curves["C1"].components[0]
    g = tighten(dr4, c1.crossings, "loop", c1.params)
    res = maximal_embedded_strip(dr4, g)
    assert abs(res.width - 4.0) < 1e-9


def test_maximal_strip_off_center_torus(torus):
    crossings, params, _ = trace_closed_leaf(torus, 0, 0.2 + 0.7j, 1 + 0j)
    g = tighten(torus, crossings, "loop", params)
    res = maximal_embedded_strip(torus, g)
    assert abs(res.width - 1.0) < 1e-9

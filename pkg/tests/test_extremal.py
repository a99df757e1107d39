"""Certified extremal length brackets."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatel.curves import loop, scale, slope_curve
from flatel.errors import InputError, NotJSForCurve
from flatel.examples import make_example_surface
from flatel.extremal import (
    collar_lower_bound,
    el_cylinder,
    el_interval,
    el_lower_metric,
    el_quadratic_scaling_check,
    el_upper_annuli,
)

# Bracket endpoints certified by finite-element energies carry a one-sided
# safety haircut of 1e-9 relative; exact cylinder values carry none.
REL = 1e-9


def test_cylinder_exact(unit_cylinder):
    core = unit_cylinder.named_curves["core"]
    iv = el_cylinder(unit_cylinder, core, 1 + 0j)
    assert iv.lower == iv.upper == 2.0


def test_cylinder_weighted_core(unit_cylinder):
    iv = el_cylinder(unit_cylinder, scale(unit_cylinder.named_curves["core"], 3.0), 1 + 0j)
    assert iv.lower == iv.upper == 18.0


def test_non_cylinder_direction_raises(unit_cylinder):
    with pytest.raises(NotJSForCurve):
        el_cylinder(unit_cylinder, unit_cylinder.named_curves["core"], 1j)


def test_torus_diagonal(torus):
    iv = el_interval(torus, slope_curve(torus, 1, 1))
    assert abs(iv.lower - 2.0) < 1e-9
    assert abs(iv.upper - 2.0) < 1e-9


def test_doubled_rectangle_family():
    for t in (1.0, 2.0, 4.0, 8.0, 16.0):
        s = make_example_surface("double_rectangle", t=t)
        iv = el_interval(s, s.named_curves["C1"])
        assert abs(iv.lower - 2.0 / t) < 1e-9, t
        assert abs(iv.upper - 2.0 / t) < 1e-9, t


def test_pillowcase_brackets(pillowcase):
    bp = el_interval(pillowcase, pillowcase.named_curves["bottom_pair"])
    assert bp.lower == bp.upper == 2.0
    dg = el_interval(pillowcase, pillowcase.named_curves["diagonal"], level=2)
    assert dg.lower <= 4.0 <= dg.upper
    assert dg.gap <= 4.0 * 2.1e-9


def test_branched_double_intervals_level3():
    # Frozen level-3 brackets for the non-symmetric lifted curve.
    frozen = {
        2.0: (1.4425683969620529, 2.1992324288970497),
        4.0: (1.4166220588896155, 2.0389342656789373),
        8.0: (1.416146994497345, 2.0319910524442966),
        16.0: (1.4161468351310136, 2.0319780681536885),
    }
    for t, (lo, hi) in frozen.items():
        s = make_example_surface("branched_double", t=t)
        iv = el_interval(s, s.named_curves["C2"], level=3)
        assert abs(iv.lower - lo) <= 1e-9 * max(1.0, lo), (t, iv.lower)
        assert abs(iv.upper - hi) <= 1e-9 * max(1.0, hi), (t, iv.upper)


def test_upper_bounds_refine_monotonically():
    s = make_example_surface("branched_double", t=8.0)
    c2 = s.named_curves["C2"]
    uppers, lowers = [], []
    for level in range(4):
        iv = el_interval(s, c2, level=level)
        uppers.append(iv.upper)
        lowers.append(iv.lower)
        assert iv.lower <= iv.upper
    for a, b in zip(uppers, uppers[1:]):
        assert b <= a * (1 + 1e-12)
    for a, b in zip(lowers, lowers[1:]):
        assert b >= a * (1 - 1e-12)


def test_interval_refuses_crossed_bounds():
    from flatel.extremal import ELInterval
    from flatel.errors import ValidationError

    with pytest.raises(ValidationError):
        ELInterval(2.0, 1.0)
    iv = ELInterval(1.0, 3.0)
    assert iv.midpoint == 2.0
    assert iv.gap == 2.0


def test_flat_metric_lower_with_density(pillowcase):
    bp = pillowcase.named_curves["bottom_pair"]
    assert abs(el_lower_metric(pillowcase, bp) - 2.0) < 1e-12
    assert abs(el_lower_metric(pillowcase, bp, [1.0, 1.0]) - 2.0) < 1e-12
    assert abs(el_lower_metric(pillowcase, bp, [1.0, 0.2]) - 1.3846153846153846) < 1e-12
    with pytest.raises(InputError):
        el_lower_metric(pillowcase, bp, [1.0])


def test_annuli_upper_bound(dr4):
    c1 = dr4.named_curves["C1"]
    up = el_upper_annuli(dr4, c1)
    assert up <= 0.5 * (1 + 1e-9) + 1e-12


def test_collar_bound_positive(dr4):
    s2 = make_example_surface("branched_double", t=2.0)
    v = collar_lower_bound(s2)
    assert v > 0


def test_el_monotone_under_weight_subset(pillowcase):
    # Dropping a component cannot raise certified lower bounds of the rest.
    bp = pillowcase.named_curves["bottom_pair"]
    iv = el_interval(pillowcase, bp)
    half = el_interval(pillowcase, scale(bp, 0.5))
    assert half.upper <= iv.upper


def test_empty_curve_is_zero(pillowcase):
    iv = el_interval(pillowcase, loop([(0, 1), (1, 2)]))
    assert iv.lower == iv.upper == 0.0


@settings(max_examples=20, deadline=None, derandomize=True)
@given(k=st.floats(0.25, 4.0, allow_nan=False))
def test_quadratic_scaling_cylinder(k):
    s = make_example_surface("cylinder", circumference=2.0, height=1.0)
    assert el_quadratic_scaling_check(s, s.named_curves["core"], k)


def test_quadratic_scaling_across_corpus():
    cases = []
    pil = make_example_surface("pillowcase")
    cases.append((pil, pil.named_curves["bottom_pair"]))
    dr = make_example_surface("double_rectangle", t=4.0)
    cases.append((dr, dr.named_curves["C1"]))
    s4 = make_example_surface("branched_double", t=4.0)
    cases.append((s4, s4.named_curves["C2"]))
    for s, c in cases:
        for k in (0.5, 2.0, 3.0):
            assert el_quadratic_scaling_check(s, c, k, level=1)


def test_level_must_be_nonnegative(pillowcase):
    with pytest.raises(InputError):
        el_interval(pillowcase, pillowcase.named_curves["bottom_pair"], level=-1)

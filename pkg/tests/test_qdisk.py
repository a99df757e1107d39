"""Area quadrature for holomorphic densities on the unit disk."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatel.errors import InputError
from flatel.qdisk import (
    Annulus,
    Diff,
    Disk,
    DiskDifferential,
    Empty,
    Union,
    area_q,
    concentration_experiment,
    mobius_push,
    parse_region,
    squaring_pullback_check,
    subharmonic_ring_check,
    verify_small_area,
)

ONE = DiskDifferential((1.0,))
Z = DiskDifferential((0.0, 1.0))
Z2 = DiskDifferential((0.0, 0.0, 1.0))
UNIT = Disk(0j, 1.0)


def test_closed_form_masses():
    assert abs(area_q(ONE, UNIT) - math.pi) < 1e-14
    assert abs(area_q(Z, UNIT) - 2.0 * math.pi / 3.0) < 1e-12
    assert abs(area_q(Z2, UNIT) - math.pi / 2.0) < 1e-12
    assert abs(area_q(Z2, Disk(0j, 0.7)) - math.pi * 0.7**4 / 2.0) < 1e-12
    assert abs(area_q(DiskDifferential((1.0,), pole=True), UNIT) - 2.0 * math.pi) < 1e-12
    assert abs(area_q(ONE, Disk(0.3 + 0.2j, 0.4)) - math.pi * 0.16) < 1e-8
    assert area_q(ONE, Empty()) == 0.0
    assert area_q(ONE, Disk(2.0, 0.5)) == 0.0  # fully outside the disk


def test_union_of_disjoint_disks():
    u = Union(Disk(-0.5, 0.2), Disk(0.5, 0.2))
    assert abs(area_q(ONE, u) - 2.0 * math.pi * 0.04) < 1e-8


@settings(max_examples=25, deadline=None, derandomize=True)
@given(
    cx=st.floats(-0.6, 0.6),
    cy=st.floats(-0.6, 0.6),
    r=st.floats(0.05, 0.5),
)
def test_mass_additivity_over_cuts(cx, cy, r):
    # The region algebra must split the disk without losing mass.
    hole = Disk(complex(cx, cy), r)
    for q in (ONE, DiskDifferential((0.5, 0.25, -0.125))):
        total = area_q(q, UNIT)
        split = area_q(q, hole) + area_q(q, Diff(UNIT, hole))
        assert abs(split - total) < 1e-7 * max(1.0, total)


def test_mobius_preserves_total_mass():
    assert area_q(mobius_push(0j), UNIT) == pytest.approx(math.pi, abs=1e-12)
    assert area_q(mobius_push(0.9), UNIT) == pytest.approx(math.pi, abs=1e-10)


def test_mobius_compact_mass_closed_form():
    # For real w the preimage of D(0, r0) is the round disk with real
    # diameter endpoints (x - w)/(1 - w x) at x = +-r0, so the pushed
    # mass equals that disk's euclidean area.
    w, r0 = 0.99, 0.5
    phi = lambda x: (x - w) / (1.0 - w * x)
    radius = 0.5 * (phi(r0) - phi(-r0))
    expected = math.pi * radius * radius
    got = area_q(mobius_push(w), Disk(0j, r0))
    assert abs(got - expected) < 1e-10
    assert got < 0.2  # mass drains out of every compact set


def test_mobius_peak_concentration():
    m = mobius_push(0.9)
    near = area_q(m, Disk(1.0, 0.3)) / math.pi
    assert abs(near - 0.875938178897872) < 1e-9
    far = area_q(m, Disk(-1.0, 0.3)) / math.pi
    assert far < 0.01 < near


def test_small_area_constant_saturates():
    rep = verify_small_area(ONE, 0.55)
    assert rep.passed
    assert rep.bound == pytest.approx(0.55**2 * rep.total + 1e-8, abs=1e-15)
    assert abs(rep.inner - 0.55**2 * rep.total) <= 1e-8


def test_small_area_strict_for_higher_order():
    rep = verify_small_area(Z2, 0.55)
    assert rep.passed
    assert abs(rep.inner - math.pi * 0.55**4 / 2.0) < 1e-10
    assert rep.inner < rep.bound - 0.1  # genuinely slack, not borderline


def test_small_area_rejects_bad_radius():
    with pytest.raises(InputError):
        verify_small_area(ONE, 0.0)
    with pytest.raises(InputError):
        verify_small_area(ONE, 1.5)


def test_ring_means_nondecreasing():
    rep = subharmonic_ring_check(Z, 0.3, 0.8)
    assert abs(rep.inner_mean - 2.0 * math.pi * 0.3) < 1e-9
    assert abs(rep.outer_mean - 2.0 * math.pi * 0.8) < 1e-9
    assert rep.passed
    flat = subharmonic_ring_check(ONE, 0.3, 0.8)
    assert flat.passed
    assert flat.inner_mean == pytest.approx(flat.outer_mean, abs=1e-10)
    with pytest.raises(InputError):
        subharmonic_ring_check(ONE, 0.8, 0.3)


def test_squaring_pullback_identity():
    sq = squaring_pullback_check(DiskDifferential((1.0, 0.5)), Disk(0j, 0.6))
    assert sq.consistent and sq.relative_error < 1e-12
    pole = squaring_pullback_check(DiskDifferential((1.0,), pole=True), Annulus(0.3, 0.6))
    assert pole.consistent and pole.relative_error < 1e-12
    assert abs(pole.pulled - 2.0 * math.pi * 0.6) < 1e-9
    mixed = squaring_pullback_check(
        DiskDifferential((0.5, 0.25, -0.125)),
        Diff(Disk(0j, 0.8), Disk(0.2 + 0.1j, 0.2)),
    )
    assert mixed.consistent and mixed.relative_error < 1e-6


def test_squaring_pole_region_guard():
    with pytest.raises(InputError):
        squaring_pullback_check(DiskDifferential((1.0,), pole=True), Disk(0j, 0.5))


def test_parse_region_grammar():
    assert isinstance(parse_region("disk(0,0,1)"), Disk)
    assert isinstance(parse_region("annulus(0.5,1)"), Annulus)
    d = parse_region("diff(disk(0,0,1),disk(0.2,0,0.3))")
    assert isinstance(d, Diff)
    u = parse_region("union(disk(0,0,0.4),annulus(0.6,0.9))")
    assert isinstance(u, Union)
    annulus = parse_region("annulus(0.5,1)")
    direct = Diff(Disk(0j, 1.0), Disk(0j, 0.5))
    assert abs(area_q(ONE, annulus) - area_q(ONE, direct)) < 1e-10
    for bad in ("disk(0,0)", "ball(1)", "annulus(1,0.5)", "disk(0,0,-1)", "", "disk(0,0,1)x"):
        with pytest.raises(InputError):
            parse_region(bad)


def test_concentration_first_rows():
    rows = concentration_experiment(
        parse_region("annulus(0.5,1)"),
        parse_region("disk(0,0,0.4)"),
        parse_region("annulus(0.9,1)"),
        [1.0 - 2.0**-n for n in (1, 2, 3)],
    )
    frozen = [
        (1, 0.8400000000000001, 0.2836155305077583),
        (2, 0.9352066115702489, 0.47682764311446413),
        (3, 0.9789960092417556, 0.6916118942881101),
    ]
    for (n, om, bm), (fn, fom, fbm) in zip(rows, frozen):
        assert n == fn
        assert abs(om - fom) < 1e-9
        assert abs(bm - fbm) < 1e-9


def test_concentration_rejects_overlapping_regions():
    with pytest.raises(InputError):
        concentration_experiment(
            parse_region("annulus(0.5,1)"),
            parse_region("disk(0,0,0.7)"),
            parse_region("annulus(0.9,1)"),
            [0.5],
        )


def test_differential_validation():
    with pytest.raises(InputError):
        DiskDifferential(())
    with pytest.raises(InputError):
        area_q(ONE, UNIT, tol=0.0)

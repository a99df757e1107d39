"""Multicurves: reduction, intersections, slopes, and hole classes."""

import math

import pytest

from flatel.curves import (
    MultiCurve,
    canonical_class,
    capped_class,
    intersection_number,
    loop,
    pants_class,
    pushforward_reduce,
    reduce,
    scale,
    signed_crossings,
    slope_curve,
)
from flatel.errors import Inconclusive, InputError
from flatel.stretch import Placement, SubsurfaceEmbedding

# Torus slope pairs with transverse shortest representatives; the
# intersection count of (p,q) and (r,s) lines is |p*s - q*r|.
TRANSVERSE_PAIRS = [
    ((1, 0), (0, 1), 1),
    ((1, 0), (2, 1), 1),
    ((1, 0), (2, 3), 3),
    ((0, 1), (1, 2), 1),
    ((0, 1), (3, 2), 3),
    ((1, 2), (2, 1), 3),
    ((1, 2), (2, 3), 1),
    ((2, 1), (3, 2), 1),
    ((3, 2), (2, 3), 5),
]


def expected_parity(p, q):
    if p % 2 and q % 2:
        return "a"
    if p % 2:
        return "b"
    return "c"


def test_reduce_cancels_backtracks(torus):
    c = slope_curve(torus, 1, 0)
    cr = c.components[0].crossings
    # Inserting an edge crossing immediately undone reduces away.
    wiggled = loop((cr[0], (0, 1), *_partner_back(torus, 0, 1), *cr[1:]))
    red = reduce(torus, wiggled)
    assert canonical_class(torus, red.components[0].crossings, "loop") == (
        canonical_class(torus, cr, "loop")
    )


def _partner_back(surface, p, i):
    q, j = surface.partner(p, i)
    return ((q, j),)


def test_reduce_drops_trivial_components(pillowcase):
    c = MultiCurve(
        pillowcase.named_curves["bottom_pair"].components
        + loop([(0, 1), (1, 2)]).components
    )
    red = reduce(pillowcase, c)
    assert len(red) == 1


def test_scale_weights():
    c = loop([(0, 0)], weight=2.0)
    assert scale(c, 1.5).components[0].weight == 3.0
    with pytest.raises(InputError):
        scale(c, 0.0)


def test_torus_intersection_table(torus):
    for (p, q), (r, s), want in TRANSVERSE_PAIRS:
        got = intersection_number(
            torus, slope_curve(torus, p, q), slope_curve(torus, r, s)
        )
        assert abs(got - want) <= 1e-9, ((p, q), (r, s), got)


def test_intersection_weights_multiply(torus):
    a = scale(slope_curve(torus, 1, 0), 2.0)
    b = scale(slope_curve(torus, 0, 1), 3.0)
    assert abs(intersection_number(torus, a, b) - 6.0) <= 1e-9


def test_slope_rejects_bad_input(torus):
    with pytest.raises(InputError):
        slope_curve(torus, 2, 4)
    with pytest.raises(InputError):
        slope_curve(torus, 0, 0)


def test_four_holed_arc_crossings(four_holed):
    # The (p,q) leaf meets the horizontal hole-to-hole arcs q times and
    # the vertical ones p times.
    for p, q in [(1, 1), (3, 2), (2, 3), (5, 7)]:
        cs = slope_curve(four_holed, p, q)
        named = four_holed.named_curves
        assert abs(intersection_number(four_holed, cs, named["gamma_ac"]) - q) <= 1e-9
        assert abs(intersection_number(four_holed, cs, named["gamma_bd"]) - q) <= 1e-9
        assert abs(intersection_number(four_holed, cs, named["gamma_ab"]) - p) <= 1e-9
        assert abs(intersection_number(four_holed, cs, named["gamma_cd"]) - p) <= 1e-9


def test_signed_crossings_carry_weight(four_holed):
    cs = scale(slope_curve(four_holed, 1, 2), 0.5)
    arc = four_holed.named_curves["gamma_ab"]
    s = signed_crossings(four_holed, cs, arc)
    assert abs(s - round(s / 0.5) * 0.5) <= 1e-9


def test_capped_class_parity_table(four_holed):
    for p in range(1, 8):
        for q in range(1, 8):
            if math.gcd(p, q) != 1:
                continue
            curve = scale(slope_curve(four_holed, p, q), 1.0 / q)
            label, weight = capped_class(four_holed, curve)
            assert label == expected_parity(p, q), (p, q, label)
            assert abs(weight - 1.0 / q) <= 1e-12


def test_pushforward_parity_table(four_holed, capped):
    e = SubsurfaceEmbedding(
        four_holed, capped, [Placement(r) for r in range(len(four_holed.polygons))]
    )
    for p in range(1, 8):
        for q in range(1, 8):
            if math.gcd(p, q) != 1:
                continue
            curve = scale(slope_curve(four_holed, p, q), 1.0 / q)
            label, weight = pants_class(capped, pushforward_reduce(e, curve))
            assert label == expected_parity(p, q), (p, q, label)
            assert abs(weight - 1.0 / q) <= 1e-12


def test_pushforward_drops_interior_seams(four_holed, capped):
    e = SubsurfaceEmbedding(
        four_holed, capped, [Placement(r) for r in range(len(four_holed.polygons))]
    )
    c = slope_curve(four_holed, 1, 1)
    img = pushforward_reduce(e, c)
    assert len(img) == 1
    # Every remaining crossing names a codomain edge.
    for pi, ei in img.components[0].crossings:
        assert 0 <= pi < len(capped.polygons)
        assert 0 <= ei < capped.n_sides(pi)


def test_pants_class_requires_reference_arcs(pillowcase):
    with pytest.raises(InputError):
        pants_class(pillowcase, pillowcase.named_curves["bottom_pair"])


def test_degenerate_position_is_inconclusive(four_holed):
    # The named hole loops share endpoints with the reference arcs, so
    # their signed counts are in degenerate position.  That must surface
    # as Inconclusive, never as a silently wrong label.
    for key in ("C_a", "C_b", "C_c"):
        with pytest.raises(Inconclusive):
            capped_class(four_holed, four_holed.named_curves[key])

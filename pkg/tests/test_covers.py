"""Finite covers: construction, pullbacks, and degree scaling."""

import random

import pytest

from flatel.covers import (
    CoverSpec,
    build_cover,
    cover_components,
    cover_embedding,
    el_cover_check,
    pullback_curve,
)
from flatel.errors import InputError
from flatel.examples import make_example_surface
from flatel.extremal import el_cylinder
from flatel.stretch import identity_embedding


def _gluing_rows(surface):
    return [(tuple(g.a), tuple(g.b), g.kind) for g in surface.gluings]


def test_branch_swap_cover_matches_builder():
    # Swapping sheets across the long seam of the doubled rectangle
    # reproduces the four-polygon builder exactly, punctures included.
    for t in (4.0, 16.0):
        dr = make_example_surface("double_rectangle", t=t)
        built = build_cover(CoverSpec(dr, 2, {0: (1, 0)}))
        target = make_example_surface("branched_double", t=t)
        assert built.polygons == target.polygons
        assert _gluing_rows(built) == _gluing_rows(target)
        assert built.punctures == target.punctures == ((0, 0), (0, 3), (1, 3))


def test_shift_cover_connected_triples_length(unit_cylinder):
    spec = CoverSpec(unit_cylinder, 3, {0: (1, 2, 0)})
    assert cover_components(spec) == (frozenset({0, 1, 2}),)
    rep = el_cover_check(spec, unit_cylinder.named_curves["core"])
    assert rep.components == 1
    assert rep.base_interval.lower == rep.base_interval.upper == 2.0
    assert rep.cover_interval.lower == rep.cover_interval.upper == 6.0
    assert rep.consistent and rep.exact


def test_trivial_cover_splits_into_sheets(unit_cylinder):
    spec = CoverSpec(unit_cylinder, 2)
    assert cover_components(spec) == (frozenset({0}), frozenset({1}))
    pb = pullback_curve(spec, unit_cylinder.named_curves["core"])
    assert [(c.crossings, c.weight) for c in pb.components] == [
        (((0, 1),), 1.0),
        (((1, 1),), 1.0),
    ]
    cov = build_cover(spec)
    iv = el_cylinder(cov, pb, 1 + 0j)
    assert iv.lower == iv.upper == 4.0


def test_branch_swap_pullback_on_doubled_rectangle(dr4):
    spec = CoverSpec(dr4, 2, {2: (1, 0)})
    pb = pullback_curve(spec, dr4.named_curves["C1"])
    assert [(c.crossings, c.weight) for c in pb.components] == [
        (((0, 0), (2, 1)), 1.0),
        (((1, 0), (3, 1)), 1.0),
    ]
    rep = el_cover_check(spec, dr4.named_curves["C1"])
    assert rep.base_interval.lower == 0.5
    assert rep.cover_interval.lower == rep.cover_interval.upper == 1.0
    assert rep.consistent and rep.exact


def test_cover_area_scales_by_degree(pillowcase):
    spec = CoverSpec(pillowcase, 5, {0: (1, 2, 3, 4, 0)})
    cov = build_cover(spec)
    assert abs(cov.area - 5.0 * pillowcase.area) < 1e-12


def test_random_covers_scale_extremal_length():
    rng = random.Random(7)
    for _ in range(6):
        circ = rng.uniform(0.5, 4.0)
        height = rng.uniform(0.25, 2.0)
        s = make_example_surface("cylinder", circumference=circ, height=height)
        d = rng.choice([2, 3, 5])
        perm = list(range(d))
        rng.shuffle(perm)
        spec = CoverSpec(s, d, {0: tuple(perm)})
        rep = el_cover_check(spec, s.named_curves["core"])
        base = rep.base_interval.midpoint
        lifted = rep.cover_interval.midpoint
        assert rep.consistent
        assert abs(lifted - d * base) <= 1e-9 * max(1.0, d * base)


def test_monodromy_normalization_and_errors(unit_cylinder):
    spec = CoverSpec(unit_cylinder, 2, [(1, 0)])
    assert spec.monodromy == ((1, 0),)
    with pytest.raises(InputError):
        CoverSpec(unit_cylinder, 0)
    with pytest.raises(InputError):
        CoverSpec(unit_cylinder, 2, {0: (0, 0)})
    with pytest.raises(InputError):
        CoverSpec(unit_cylinder, 2, {5: (1, 0)})
    with pytest.raises(InputError):
        spec.step(0, 0, 0)  # boundary edge has no gluing to cross


def test_cover_embedding_lifts_both_sides(dr4):
    spec = CoverSpec(dr4, 2, {2: (1, 0)})
    ce = cover_embedding(identity_embedding(dr4), spec)
    assert ce.spec.degree == 2
    assert ce.domain_spec.degree == 2
    lifted = ce.lifted
    assert len(lifted.placements) == 2 * len(dr4.polygons)
    # Pullback then pushforward through the lift agrees with pushing
    # forward downstairs and pulling back: both give the full preimage.
    from flatel.curves import pushforward_reduce

    c1 = dr4.named_curves["C1"]
    via_lift = pushforward_reduce(lifted, pullback_curve(ce.domain_spec, c1))
    direct = pullback_curve(spec, c1)
    assert sorted(c.crossings for c in via_lift.components) == sorted(
        c.crossings for c in direct.components
    )

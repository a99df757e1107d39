"""Stretch factor bounds for subsurface embeddings."""

import math
import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatel.covers import CoverSpec
from flatel.errors import InputError, NotLoose, ValidationError
from flatel.examples import make_example_surface
from flatel.stretch import (
    Placement,
    SubsurfaceEmbedding,
    branched_strip_lift,
    default_candidates,
    identity_embedding,
    pigeonhole_witness,
    sf_compose_check,
    sf_cover_report,
    sf_lower,
    sf_upper_loose,
    sf_upper_qc,
)

ROT90 = ((0.0, -1.0), (1.0, 0.0))


def _strip(circumference=2.0, height=1.0):
    return make_example_surface(
        "cylinder", circumference=circumference, height=height
    )


def test_placement_geometry():
    p = Placement(0, ((2.0, 0.0), (0.0, 0.5)), offset=1 + 2j)
    assert p.det == 1.0
    assert p.apply(1 + 1j) == 3 + 2.5j
    assert p.apply_direction(1j) == 0.5j
    assert p.singular_values() == (2.0, 0.5)
    assert not p.is_similarity()
    rot = Placement(0, ROT90)
    assert rot.is_similarity()
    assert rot.singular_values() == (1.0, 1.0)
    with pytest.raises(ValidationError):
        Placement(0, ((1.0, 0.0), (0.0, -1.0)))  # orientation-reversing


def test_identity_embedding_is_neutral(unit_cylinder):
    e = identity_embedding(unit_cylinder)
    assert not e.strict and not e.annular
    assert sf_upper_qc(e) == 1.0
    b = sf_lower(e, default_candidates(unit_cylinder))
    assert b.lower == 1.0


def test_substrip_bounds():
    # A height-s strip inside the height-t one stretches by exactly s/t.
    for s, t, offset in ((2.0, 8.0, 3j), (4.0, 16.0, 6j)):
        dom, cod = _strip(height=s), _strip(height=t)
        e = SubsurfaceEmbedding(dom, cod, [Placement(0, offset=offset)])
        assert e.strict and e.annular
        b = sf_lower(e, default_candidates(dom))
        assert b.lower == s / t
        assert b.lower_witness["domain_el"] == (2.0 / s, 2.0 / s)
        assert b.lower_witness["image_el"] == (2.0 / t, 2.0 / t)
        assert sf_upper_qc(e) == 1.0
        assert b.lower <= sf_upper_qc(e)


def test_boundary_touching_strip_is_not_annular():
    dom, cod = _strip(height=2.0), _strip(height=8.0)
    e = SubsurfaceEmbedding(dom, cod, [Placement(0)])
    assert e.strict and not e.annular


def test_qc_upper_tracks_distortion():
    dom = _strip(height=2.0)
    tall = SubsurfaceEmbedding(
        dom, _strip(height=8.0), [Placement(0, ((1.0, 0.0), (0.0, 4.0)))]
    )
    assert sf_upper_qc(tall) == 4.0
    wide = SubsurfaceEmbedding(
        dom, _strip(circumference=3.0, height=2.0),
        [Placement(0, ((1.5, 0.0), (0.0, 1.0)))],
    )
    assert sf_upper_qc(wide) == 1.5


def test_overlapping_placements_rejected(dr4):
    cod = _strip(height=8.0)
    with pytest.raises(ValidationError, match="overlap"):
        SubsurfaceEmbedding(
            dr4, cod, [Placement(0, ROT90, offset=2.0), Placement(0, ROT90, offset=0.5)]
        )


def test_flag_cross_checks():
    dom, cod = _strip(height=2.0), _strip(height=8.0)
    with pytest.raises(ValidationError, match="strict"):
        SubsurfaceEmbedding(dom, cod, [Placement(0, offset=3j)], strict=False)
    with pytest.raises(ValidationError, match="annular"):
        SubsurfaceEmbedding(dom, cod, [Placement(0)], annular=True)


def test_loose_triple_upper_bound():
    big, thin = _strip(height=1.0), _strip(height=0.3)

    def strip_at(offset):
        return SubsurfaceEmbedding(thin, big, [Placement(0, offset=offset * 1j)])

    fs = [strip_at(0.0), strip_at(0.35), strip_at(0.7)]
    assert sf_upper_loose(fs) == 1.0 - 1.0 / 3.0
    # Pairwise touching closures with empty triple intersection still count.
    assert sf_upper_loose([strip_at(0.0), strip_at(0.3), strip_at(0.6)]) == 1.0 - 1.0 / 3.0
    bound = sf_upper_loose(fs)
    for f in fs:
        b = sf_lower(f, default_candidates(thin))
        assert b.lower <= bound + 1e-12


def test_loose_rejects_overlap_and_singletons():
    big, thin = _strip(height=1.0), _strip(height=0.3)

    def strip_at(offset):
        return SubsurfaceEmbedding(thin, big, [Placement(0, offset=offset * 1j)])

    with pytest.raises(NotLoose):
        sf_upper_loose([strip_at(0.0), strip_at(0.1), strip_at(0.2)])
    with pytest.raises(InputError):
        sf_upper_loose([strip_at(0.0)])
    other = SubsurfaceEmbedding(thin, _strip(height=2.0), [Placement(0)])
    with pytest.raises(InputError):
        sf_upper_loose([strip_at(0.0), other])


def test_compose_submultiplicative():
    quarter, mid, big = _strip(height=0.25), _strip(height=0.5), _strip(height=1.0)
    inner = SubsurfaceEmbedding(quarter, mid, [Placement(0, offset=0.1j)])
    outer = SubsurfaceEmbedding(mid, big, [Placement(0, offset=0.2j)])
    rep = sf_compose_check(inner, outer, default_candidates(quarter))
    assert rep.lower_composite == 0.25
    assert rep.upper_inner == 0.5
    assert rep.upper_outer == 0.5
    assert rep.consistent
    with pytest.raises(InputError):
        sf_compose_check(outer, inner, default_candidates(mid))


def test_pigeonhole_witness_cases():
    atoms = {(): 1.0, (0,): 2.0, (1,): 1.0, (2,): 1.5, (0, 1): 0.5, (1, 2): 1.0}
    assert pigeonhole_witness(7.0, atoms) == 0
    assert pigeonhole_witness(4.5, {(0,): 1.0, (1,): 3.0, (2,): 0.5}, n=3) == 2
    with pytest.raises(InputError):
        pigeonhole_witness(2.0, {(0, 1, 2): 2.0}, n=3)


def _brute_force_witness(total, atoms, n):
    # Index k is a valid witness when the mass missed by copy k is at
    # least total / n, i.e. copy k covers at most (1 - 1/n) of the total.
    best, best_missed = None, -1.0
    for k in range(n):
        missed = sum(m for key, m in atoms.items() if k not in key)
        if missed > best_missed + 1e-15:
            best, best_missed = k, missed
    return best, best_missed


@settings(max_examples=60, deadline=None, derandomize=True)
@given(
    masses=st.lists(st.floats(0.01, 2.0), min_size=3, max_size=8),
    seed=st.integers(0, 10_000),
)
def test_pigeonhole_matches_brute_force(masses, seed):
    rng = random.Random(seed)
    n = 3
    keys = [()] + [(k,) for k in range(n)] + list(combinations(range(n), 2))
    atoms = {}
    for m in masses:
        key = rng.choice(keys)
        atoms[key] = atoms.get(key, 0.0) + m
    total = sum(atoms.values())
    k = pigeonhole_witness(total, atoms, n=n)
    _, best_missed = _brute_force_witness(total, atoms, n)
    missed_k = sum(m for key, m in atoms.items() if k not in key)
    assert missed_k >= total / n - 1e-9
    assert missed_k >= best_missed - 1e-9


def test_cover_report_branched_strips():
    f, spec, lifted = branched_strip_lift(4.0, 16.0)
    rep = sf_cover_report(
        f,
        spec,
        default_candidates(f.domain),
        level=3,
        lifted=lifted,
        lifted_candidates=[lifted.domain.named_curves["C2"]],
    )
    assert rep.degree == 2
    assert rep.base.lower == 0.25
    assert abs(rep.cover.lower - 0.6945524723228171) <= 1e-9
    assert rep.monotone
    assert rep.gap == pytest.approx(rep.cover.lower - rep.base.lower)
    assert rep.cover.lower >= 2.0 * rep.base.lower - 1e-9


def test_branched_strip_lift_validation():
    with pytest.raises(InputError):
        branched_strip_lift(4.0, 4.0)
    with pytest.raises(InputError):
        branched_strip_lift(-1.0, 4.0)
    f, spec, lifted = branched_strip_lift(2.0, 8.0)
    assert spec.degree == 2
    assert len(lifted.placements) == 4
    assert f.strict


def test_default_candidates_cover_basic_classes(torus):
    cands = default_candidates(torus)
    assert len(cands) == 3
    for c in cands:
        assert len(c.components) >= 1


def test_lower_bound_scale_invariance():
    # Scaling both surfaces by the same similarity leaves SF bounds alone.
    dom, cod = _strip(height=2.0), _strip(height=8.0)
    e = SubsurfaceEmbedding(dom, cod, [Placement(0, offset=3j)])
    dom2 = _strip(circumference=6.0, height=6.0)
    cod2 = _strip(circumference=6.0, height=24.0)
    e2 = SubsurfaceEmbedding(dom2, cod2, [Placement(0, offset=9j)])
    b, b2 = sf_lower(e, default_candidates(dom)), sf_lower(e2, default_candidates(dom2))
    assert abs(b.lower - b2.lower) < 1e-12
    assert sf_upper_qc(e) == sf_upper_qc(e2)

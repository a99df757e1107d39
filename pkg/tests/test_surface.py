"""Surface construction, validation, and censuses."""

import math

import pytest

from flatel.errors import ValidationError
from flatel.examples import make_example_surface
from flatel.surface import FlatSurface, Gluing

TWO_PI = 2.0 * math.pi


def unit_torus_data():
    square = [0j, 1 + 0j, 1 + 1j, 1j]
    gluings = [
        Gluing((0, 0), (0, 2), "translation"),
        Gluing((0, 1), (0, 3), "translation"),
    ]
    return [square], gluings


def double_of(polygon):
    """Two mirror copies of a rectilinear polygon glued along every edge.

    Horizontal edges fold by translation, vertical ones by half-turn,
    matching how the stock doubled surfaces are assembled.
    """
    front = [complex(v) for v in polygon]
    n = len(front)
    back = [front[0].conjugate()] + [v.conjugate() for v in reversed(front[1:])]
    gluings = []
    for i in range(n):
        w = front[(i + 1) % n] - front[i]
        kind = "translation" if abs(w.imag) < 1e-12 else "halfturn"
        gluings.append(Gluing((0, i), (1, n - 1 - i), kind))
    return FlatSurface([front, back], gluings)


def test_unit_torus_valid():
    s = FlatSurface(*unit_torus_data())
    report = s.validate()
    assert report.ok and report.violations == []
    assert len(s.vertex_classes) == 1
    assert abs(s.vertex_classes[0].angle - TWO_PI) < 1e-9


def test_length_mismatch_reported():
    square = [0j, 1 + 0j, 1 + 1.1j, 1j]
    s = FlatSurface(
        [square],
        [
            Gluing((0, 0), (0, 2), "translation"),
            Gluing((0, 1), (0, 3), "translation"),
        ],
    )
    report = s.validate()
    assert not report.ok
    assert any("length mismatch" in v for v in report.violations)


def test_double_of_square_is_pillowcase_like():
    s = double_of([0j, 1 + 0j, 1 + 1j, 1j])
    # Without marked punctures the four angle-pi corners are rejected.
    assert not s.validate().ok
    marked = FlatSurface(
        s.polygons, s.gluings, punctures=[(0, 0), (0, 1), (0, 2), (0, 3)]
    )
    assert marked.validate().ok
    angles = [vc.angle for vc in marked.vertex_classes]
    assert len(angles) == 4
    assert all(abs(a - math.pi) < 1e-9 for a in angles)


def test_double_of_l_hexagon_has_one_3pi_cone():
    hexagon = [0j, 2 + 0j, 2 + 1j, 1 + 1j, 1 + 2j, 2j]
    s = double_of(hexagon)
    marked = FlatSurface(
        s.polygons,
        s.gluings,
        punctures=[(0, v) for v in (0, 1, 2, 4, 5)],
    )
    assert marked.validate().ok
    interior = [vc for vc in marked.vertex_classes if not vc.puncture]
    assert len(interior) == 1
    assert abs(interior[0].angle - 3 * math.pi) < 1e-9


def test_area_examples(torus, dr4):
    assert abs(torus.area - 1.0) < 1e-12
    assert abs(dr4.area - 8.0) < 1e-12


def test_cover_area_scales_exactly():
    from flatel.covers import CoverSpec, build_cover

    base = make_example_surface("torus")
    cover = build_cover(CoverSpec(base, 3, {0: (1, 2, 0)}))
    assert cover.area == 3 * base.area


def test_cone_angles_map(torus, pillowcase):
    angles = torus.cone_angles()
    assert len(angles) == 1
    assert abs(next(iter(angles.values())) - TWO_PI) < 1e-9
    pil = pillowcase.cone_angles()
    assert sorted(abs(a - math.pi) < 1e-9 for a in pil.values()) == [True] * 4


def test_vertex_identification_uses_gluings_not_coordinates():
    # Two unit squares stacked with coinciding corner coordinates but no
    # gluing between them stay distinct vertex classes.
    a = [0j, 1 + 0j, 1 + 1j, 1j]
    s = FlatSurface([a, a], [])
    corners = {vc.corners for vc in s.vertex_classes}
    assert len(corners) == 8


def test_boundary_circles_and_euler(unit_cylinder, dr4, four_holed):
    assert len(unit_cylinder.boundary_circles) == 2
    assert unit_cylinder.euler_characteristic == 0
    # Doubling along three of four sides leaves a disk with marked points.
    assert dr4.euler_characteristic == 1
    assert len(dr4.boundary_circles) == 1
    assert len(four_holed.boundary_circles) == 4
    assert four_holed.euler_characteristic == -2


def test_capped_sphere_census(capped):
    assert capped.validate().ok
    assert capped.euler_characteristic == -1
    assert len(capped.boundary_circles) == 3
    pi_cones = [vc for vc in capped.vertex_classes if vc.puncture]
    assert len(pi_cones) == 1
    assert abs(pi_cones[0].angle - math.pi) < 1e-9


def test_gluing_involution_violations():
    square = [0j, 1 + 0j, 1 + 1j, 1j]
    s = FlatSurface(
        [square],
        [
            Gluing((0, 0), (0, 2), "translation"),
            Gluing((0, 0), (0, 3), "translation"),
        ],
    )
    report = s.validate()
    assert not report.ok
    assert any("more than one gluing" in v for v in report.violations)


def test_self_gluing_rejected():
    square = [0j, 1 + 0j, 1 + 1j, 1j]
    s = FlatSurface([square], [Gluing((0, 0), (0, 0), "translation")])
    assert not s.validate().ok


def test_require_valid_raises():
    square = [0j, 1 + 0j, 1 + 1.1j, 1j]
    s = FlatSurface(
        [square],
        [
            Gluing((0, 0), (0, 2), "translation"),
            Gluing((0, 1), (0, 3), "translation"),
        ],
    )
    with pytest.raises(ValidationError):
        s.require_valid()


def test_builders_are_valid():
    for kind, kwargs in [
        ("cylinder", {}),
        ("torus", {}),
        ("double_rectangle", {"t": 2.0}),
        ("double_rectangle", {"t": 16.0}),
        ("branched_double", {"t": 2.0}),
        ("branched_double", {"t": 16.0}),
        ("pillowcase", {}),
        ("four_holed_sphere", {}),
        ("capped_sphere", {}),
    ]:
        s = make_example_surface(kind, **kwargs)
        report = s.validate()
        assert report.ok, (kind, kwargs, report.violations)


def test_builder_parameter_validation():
    from flatel.errors import InputError

    with pytest.raises(InputError):
        make_example_surface("cylinder", circumference=-1.0)
    with pytest.raises(InputError):
        make_example_surface("double_rectangle", t=0.0)
    with pytest.raises(InputError):
        make_example_surface("no_such_surface")


def test_branched_double_records_deck(dr4):
    s4 = make_example_surface("branched_double", t=4.0)
    assert s4.deck is not None
    assert len(s4.polygons) == 4
    assert abs(s4.area - 2 * dr4.area) < 1e-12


def test_gauss_bonnet_defect_small(torus, pillowcase, capped):
    for s in (torus, pillowcase, capped):
        assert abs(s.gauss_bonnet_defect()) < 1e-6

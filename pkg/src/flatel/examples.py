"""Ready-made surfaces used throughout the tests and the CLI.

Every builder returns a fresh FlatSurface with named curves, periodic
directions, and (where useful) recipes for the finite-element bounds
attached.  Coordinates are chosen so that all polygons are axis-aligned
rectangles, which keeps the mesh generator applicable to every example.
"""

from __future__ import annotations

from .curves import Component, MultiCurve, loop
from .errors import InputError
from .surface import FlatSurface, Gluing

# Hole size of the four-holed sphere.  Small enough that the four hole
# circles stay far apart, large enough that float geometry is unstrained.
HOLE = 1.0 / 32.0


def _arc(crossings, params=None, weight=1.0) -> MultiCurve:
    return MultiCurve((Component("arc", tuple(crossings), weight, params),))


def cylinder(circumference: float = 2.0, height: float = 1.0) -> FlatSurface:
    """Flat cylinder: one rectangle with left and right sides identified.

    The core curve has extremal length circumference/height.
    """
    c, h = float(circumference), float(height)
    if c <= 0 or h <= 0:
        raise InputError("cylinder needs positive circumference and height")
    poly = [0j, c + 0j, complex(c, h), complex(0, h)]
    gluings = [Gluing((0, 1), (0, 3), "translation")]
    named = {"core": loop([(0, 1)], params=(0.5,))}
    return FlatSurface(
        [poly],
        gluings,
        named_curves=named,
        periodic_directions=[1 + 0j],
    )


def torus(a: float = 1.0, b: float = 1.0) -> FlatSurface:
    """Square-ish torus [0,a] x [0,b] with opposite sides identified."""
    a, b = float(a), float(b)
    if a <= 0 or b <= 0:
        raise InputError("torus needs positive side lengths")
    poly = [0j, a + 0j, complex(a, b), complex(0, b)]
    gluings = [
        Gluing((0, 1), (0, 3), "translation"),
        Gluing((0, 0), (0, 2), "translation"),
    ]
    named = {
        "h_core": loop([(0, 1)], params=(0.5,)),
        "v_core": loop([(0, 2)], params=(0.5,)),
        "diagonal": loop([(0, 1), (0, 2)], params=(0.5, 0.5)),
    }
    return FlatSurface(
        [poly],
        gluings,
        named_curves=named,
        periodic_directions=[1 + 0j, 1j, 1 + 1j],
    )


def double_rectangle(t: float = 4.0) -> FlatSurface:
    """Two t x 1 rectangles glued into a slit disk.

    Front F (polygon 0) occupies [0,t] x [0,1]; back B (polygon 1) is its
    mirror in [0,t] x [-1,0].  Left sides are folded onto each other
    (halfturn), producing a slit whose endpoints are the marked points.
    The right sides stay boundary.  The loop C1 around the slit is the
    core of the vertical cylinder, so EL[C1] = 2/t exactly.
    """
    t = float(t)
    if t <= 0:
        raise InputError("double_rectangle needs t > 0")
    front = [0j, t + 0j, complex(t, 1), 1j]
    back = [0j, -1j, complex(t, -1), t + 0j]
    gluings = [
        Gluing((0, 0), (1, 3), "translation"),  # g0: F bottom ~ B top
        Gluing((0, 2), (1, 1), "translation"),  # g1: F top ~ B bottom
        Gluing((0, 3), (1, 0), "halfturn"),  # g2: fold, the slit
    ]
    named = {
        "C1": loop([(0, 0), (1, 1)], params=(0.5, 0.5)),
    }
    return FlatSurface(
        [front, back],
        gluings,
        punctures=[(0, 0), (0, 3)],
        named_curves=named,
        periodic_directions=[1j],
    )


def branched_double(t: float = 4.0) -> FlatSurface:
    """Double cover of double_rectangle(t) branched over the slit's inner end.

    Polygons: F1, F2 on [0,t] x [0,1]; B1, B2 on [0,t] x [-1,0].  Sheets
    swap when crossing the fold; the two slits share the branch point at
    the origin corner class.  C2 winds around one slit; its extremal
    length tends to 2 from above as t grows.  C1_pullback is the full
    preimage of C1 downstairs (the vertical cylinder core, EL = 4/t).
    """
    t = float(t)
    if t <= 0:
        raise InputError("branched_double needs t > 0")
    rect_up = [0j, t + 0j, complex(t, 1), 1j]
    rect_dn = [0j, -1j, complex(t, -1), t + 0j]
    polys = [rect_up, rect_up, rect_dn, rect_dn]  # F1, F2, B1, B2
    gluings = [
        Gluing((0, 0), (3, 3), "translation"),  # g0: F1 bottom ~ B2 top
        Gluing((1, 0), (2, 3), "translation"),  # g1: F2 bottom ~ B1 top
        Gluing((0, 2), (2, 1), "translation"),  # g2: F1 top ~ B1 bottom
        Gluing((1, 2), (3, 1), "translation"),  # g3: F2 top ~ B2 bottom
        Gluing((0, 3), (2, 0), "halfturn"),  # g4: first slit
        Gluing((1, 3), (3, 0), "halfturn"),  # g5: second slit
    ]
    named = {
        "C2": loop(
            [(0, 0), (3, 0), (1, 0), (2, 1)], params=(0.5, 0.5, 0.5, 0.5)
        ),
        "C1_pullback": loop(
            [(0, 0), (3, 1), (1, 0), (2, 1)], params=(0.5, 0.5, 0.5, 0.5)
        ),
    }
    recipes = {
        "C2": {
            "upper": {
                "plate0": [["gluing", 4]],
                "plate1": ["boundary", ["gluing", 3]],
            },
            # Graded collar metric exp(-k x) measured from the slit circle.
            # Constant-jump cut certificates cannot work here: finite energy
            # forces zero circulation at each branch puncture, and then the
            # crossing functional agrees on C2 and on the boundary-parallel
            # class, whose flat length decays like 1/t.
            "lower": {"collar": {"k": 1.0}},
        }
    }
    return FlatSurface(
        polys,
        gluings,
        punctures=[(0, 0), (0, 3), (1, 3)],
        named_curves=named,
        periodic_directions=[1j],
        fem_recipes=recipes,
        deck=[1, 0, 3, 2],
    )


def pillowcase() -> FlatSurface:
    """Sphere with four marked cone points of angle pi.

    Quotient of the 2x2 torus by the hyperelliptic involution, assembled
    from two unit squares with the verticals folded.  The curve pairing
    the two bottom points has extremal length exactly 2, and the flat
    metric realizes it.
    """
    front = [0j, 1 + 0j, 1 + 1j, 1j]
    back = [0j, -1j, 1 - 1j, 1 + 0j]
    gluings = [
        Gluing((0, 0), (1, 3), "translation"),  # g0: F bottom ~ B top
        Gluing((0, 2), (1, 1), "translation"),  # g1: F top ~ B bottom
        Gluing((0, 3), (1, 0), "halfturn"),  # g2: left fold
        Gluing((0, 1), (1, 2), "halfturn"),  # g3: right fold
    ]
    named = {
        "bottom_pair": loop([(0, 1), (1, 0)], params=(0.5, 0.5)),
        "diagonal": loop(
            [(0, 2), (1, 2), (0, 0), (1, 0)], params=(0.5, 0.5, 0.5, 0.5)
        ),
    }
    recipes = {
        "bottom_pair": {
            "upper": {"plate0": [["gluing", 0]], "plate1": [["gluing", 1]]}
        }
    }
    return FlatSurface(
        [front, back],
        gluings,
        punctures=[(0, 0), (0, 1), (0, 2), (0, 3)],
        named_curves=named,
        periodic_directions=[1 + 0j, 1j],
        fem_recipes=recipes,
    )


def four_holed_sphere(hole: float = HOLE) -> FlatSurface:
    """Round-trip test bed for the capped-surface classifier.

    A pillowcase-like square pair with small square holes cut at the four
    would-be cone points, flattened into five axis-aligned rectangles.
    Holes are labeled a, b, c, d; they correspond to the marked points
    (0,0), (1,0), (0,1), (1,1) of the capped pillowcase.  Named curves:
    four boundary-parallel loops C_a..C_d and four arcs gamma_xy joining
    hole x to hole y.
    """
    d = float(hole)
    if not 0 < d < 0.25:
        raise InputError("hole size must lie in (0, 1/4)")
    # P0: left strip between holes a (bottom) and c (top).
    p0 = [complex(0, d), complex(d, d), complex(d, 1 - d), complex(0, 1 - d)]
    # P1: big front square minus hole columns, sides subdivided.
    p1 = [
        complex(d, 0),
        complex(1 - d, 0),
        complex(1 - d, d),
        complex(1 - d, 1 - d),
        complex(1 - d, 1),
        complex(d, 1),
        complex(d, 1 - d),
        complex(d, d),
    ]
    # P2: middle strip between holes b (bottom) and d (top).
    p2 = [
        complex(1 - d, d),
        complex(1 + d, d),
        complex(1 + d, 1 - d),
        complex(1 - d, 1 - d),
    ]
    # P3: big back square.
    p3 = [
        complex(1 + d, 0),
        complex(2 - d, 0),
        complex(2 - d, d),
        complex(2 - d, 1 - d),
        complex(2 - d, 1),
        complex(1 + d, 1),
        complex(1 + d, 1 - d),
        complex(1 + d, d),
    ]
    # P4: right strip, wraps around to P0.
    p4 = [
        complex(2 - d, d),
        complex(2, d),
        complex(2, 1 - d),
        complex(2 - d, 1 - d),
    ]
    gluings = [
        Gluing((0, 1), (1, 6), "translation"),  # P0 right ~ P1 left middle
        Gluing((1, 2), (2, 3), "translation"),  # P1 right middle ~ P2 left
        Gluing((2, 1), (3, 6), "translation"),  # P2 right ~ P3 left middle
        Gluing((3, 2), (4, 3), "translation"),  # P3 right middle ~ P4 left
        Gluing((1, 0), (3, 0), "halfturn"),  # bottom fold
        Gluing((1, 4), (3, 4), "halfturn"),  # top fold
        Gluing((4, 1), (0, 3), "translation"),  # P4 right wraps to P0 left
    ]
    named = {
        "gamma_ab": _arc([(1, 7), (1, 1)], params=(0.5, 0.5)),
        "gamma_cd": _arc([(1, 5), (1, 3)], params=(0.5, 0.5)),
        "gamma_ac": _arc([(0, 0), (0, 2)], params=(0.5, 0.5)),
        "gamma_bd": _arc([(2, 0), (2, 2)], params=(0.5, 0.5)),
        "C_a": loop(
            [(1, 6), (0, 3), (4, 3), (3, 0)], params=(0.25, 0.5, 0.5, 0.1)
        ),
        "C_b": loop([(1, 2), (2, 1), (3, 0)], params=(0.25, 0.5, 0.9)),
        "C_c": loop(
            [(1, 6), (0, 3), (4, 3), (3, 4)], params=(0.75, 0.5, 0.5, 0.1)
        ),
        "C_d": loop([(1, 2), (2, 1), (3, 4)], params=(0.75, 0.5, 0.9)),
    }
    return FlatSurface(
        [p0, p1, p2, p3, p4],
        gluings,
        named_curves=named,
    )


def capped_sphere(hole: float = HOLE) -> FlatSurface:
    """The four-holed sphere with hole d filled in: a three-holed sphere.

    Same five-rectangle layout as four_holed_sphere, with the middle strip
    extended over the old hole d and the new top edge folded onto itself.
    The fold leaves a cone angle pi at its midpoint, marked as a simple
    pole like every other pi cone in this module.  The identity placement
    of the four-holed polygons is a subsurface embedding into this
    surface whose complement is the filled disk.
    """
    d = float(hole)
    if not 0 < d < 0.25:
        raise InputError("hole size must lie in (0, 1/4)")
    p0 = [complex(0, d), complex(d, d), complex(d, 1 - d), complex(0, 1 - d)]
    p1 = [
        complex(d, 0),
        complex(1 - d, 0),
        complex(1 - d, d),
        complex(1 - d, 1 - d),
        complex(1 - d, 1),
        complex(d, 1),
        complex(d, 1 - d),
        complex(d, d),
    ]
    # P2: middle strip plus the cap over hole d, walls subdivided at the
    # old hole corners and the top subdivided at the fold point.
    p2 = [
        complex(1 - d, d),
        complex(1 + d, d),
        complex(1 + d, 1 - d),
        complex(1 + d, 1),
        complex(1, 1),
        complex(1 - d, 1),
        complex(1 - d, 1 - d),
    ]
    p3 = [
        complex(1 + d, 0),
        complex(2 - d, 0),
        complex(2 - d, d),
        complex(2 - d, 1 - d),
        complex(2 - d, 1),
        complex(1 + d, 1),
        complex(1 + d, 1 - d),
        complex(1 + d, d),
    ]
    p4 = [
        complex(2 - d, d),
        complex(2, d),
        complex(2, 1 - d),
        complex(2 - d, 1 - d),
    ]
    gluings = [
        Gluing((0, 1), (1, 6), "translation"),  # P0 right ~ P1 left middle
        Gluing((1, 2), (2, 6), "translation"),  # P1 right middle ~ P2 left lower
        Gluing((2, 1), (3, 6), "translation"),  # P2 right lower ~ P3 left middle
        Gluing((3, 2), (4, 3), "translation"),  # P3 right middle ~ P4 left
        Gluing((1, 0), (3, 0), "halfturn"),  # bottom fold
        Gluing((1, 4), (3, 4), "halfturn"),  # top fold
        Gluing((4, 1), (0, 3), "translation"),  # P4 right wraps to P0 left
        Gluing((1, 3), (2, 5), "translation"),  # P1 right upper ~ cap left
        Gluing((2, 2), (3, 5), "translation"),  # cap right ~ P3 left upper
        Gluing((2, 3), (2, 4), "halfturn"),  # cap top folds onto itself
    ]
    named = {
        "gamma_ab": _arc([(1, 7), (1, 1)], params=(0.5, 0.5)),
        "gamma_ac": _arc([(0, 0), (0, 2)], params=(0.5, 0.5)),
        "C_a": loop(
            [(1, 6), (0, 3), (4, 3), (3, 0)], params=(0.25, 0.5, 0.5, 0.1)
        ),
        "C_b": loop([(1, 2), (2, 1), (3, 0)], params=(0.25, 0.5, 0.9)),
        "C_c": loop(
            [(1, 6), (0, 3), (4, 3), (3, 4)], params=(0.75, 0.5, 0.5, 0.1)
        ),
    }
    return FlatSurface(
        [p0, p1, p2, p3, p4],
        gluings,
        punctures=[(2, 4)],
        named_curves=named,
    )


_BUILDERS = {
    "cylinder": cylinder,
    "torus": torus,
    "double_rectangle": double_rectangle,
    "branched_double": branched_double,
    "pillowcase": pillowcase,
    "four_holed_sphere": four_holed_sphere,
    "capped_sphere": capped_sphere,
}


def make_example_surface(kind: str, **params) -> FlatSurface:
    """Build one of the stock surfaces by name."""
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        known = ", ".join(sorted(_BUILDERS))
        raise InputError(f"unknown example {kind!r}; known: {known}") from None
    return builder(**params)

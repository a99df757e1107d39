"""Flat surfaces built from euclidean polygons glued along edges.

Polygons live in the complex plane with vertices listed counterclockwise.
Edges are glued in pairs by maps of the form z -> z + c ("translation",
edge vectors opposite) or z -> -z + c ("halfturn", edge vectors equal).
Unglued edges form the boundary.  Marked vertices are punctures.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

from shapely.geometry import LinearRing, Point, Polygon as ShapelyPolygon

from .errors import ValidationError

TWO_PI = 2.0 * math.pi

# Absolute tolerance for cone angle classification, in radians.
ANGLE_TOL = 1e-7


@dataclass(frozen=True)
class Gluing:
    """Identification of edge `a` with edge `b`.

    An edge reference is (polygon index, edge index); edge i runs from
    vertex i to vertex i+1 of its polygon.
    """

    a: tuple[int, int]
    b: tuple[int, int]
    kind: str  # "translation" or "halfturn"


@dataclass(frozen=True)
class VertexClass:
    """One identified vertex of the glued surface."""

    corners: tuple[tuple[int, int], ...]
    angle: float
    boundary: bool
    puncture: bool


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


class FlatSurface:
    """Immutable flat surface.  Mutating any field after construction is
    unsupported; derived data is cached on first use."""

    def __init__(
        self,
        polygons,
        gluings,
        punctures=(),
        tol: float = 1e-9,
        named_curves=None,
        periodic_directions=(),
        fem_recipes=None,
        deck=None,
    ):
        self.polygons: tuple[tuple[complex, ...], ...] = tuple(
            tuple(complex(v) for v in poly) for poly in polygons
        )
        self.gluings: tuple[Gluing, ...] = tuple(
            g if isinstance(g, Gluing) else Gluing(tuple(g[0]), tuple(g[1]), g[2])
            for g in gluings
        )
        self.punctures: tuple[tuple[int, int], ...] = tuple(tuple(p) for p in punctures)
        self.tol = float(tol)
        self.named_curves: dict = dict(named_curves or {})
        self.periodic_directions: tuple[complex, ...] = tuple(
            complex(d) for d in periodic_directions
        )
        self.fem_recipes: dict = dict(fem_recipes or {})
        self.deck = deck

    # -- basic combinatorics -------------------------------------------------

    def n_sides(self, p: int) -> int:
        return len(self.polygons[p])

    def edge_vertices(self, p: int, i: int) -> tuple[complex, complex]:
        poly = self.polygons[p]
        return poly[i], poly[(i + 1) % len(poly)]

    def edge_vector(self, p: int, i: int) -> complex:
        a, b = self.edge_vertices(p, i)
        return b - a

    def edge_point(self, p: int, i: int, t: float) -> complex:
        a, b = self.edge_vertices(p, i)
        return a + t * (b - a)

    def edge_param(self, p: int, i: int, z: complex) -> float:
        a, b = self.edge_vertices(p, i)
        v = b - a
        return ((z - a) * v.conjugate()).real / abs(v) ** 2

    def all_edges(self):
        for p, poly in enumerate(self.polygons):
            for i in range(len(poly)):
                yield (p, i)

    @cached_property
    def scale(self) -> float:
        m = 1.0
        for poly in self.polygons:
            for v in poly:
                m = max(m, abs(v))
        return m

    @cached_property
    def _partner(self) -> dict:
        """Map edge -> (partner edge, gluing index), unglued edges absent."""
        out = {}
        for k, g in enumerate(self.gluings):
            out[g.a] = (g.b, k)
            out[g.b] = (g.a, k)
        return out

    def partner(self, p: int, i: int):
        """Partner edge of (p, i), or None if it is a boundary edge."""
        hit = self._partner.get((p, i))
        return hit[0] if hit else None

    def gluing_index(self, p: int, i: int):
        hit = self._partner.get((p, i))
        return hit[1] if hit else None

    def is_boundary_edge(self, p: int, i: int) -> bool:
        return (p, i) not in self._partner

    @cached_property
    def boundary_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(e for e in self.all_edges() if e not in self._partner)

    def transition(self, p: int, i: int) -> tuple[int, complex]:
        """Chart change across edge (p, i): z -> sign*z + c lands in the
        partner polygon's coordinates.  Directions map d -> sign*d."""
        q, j = self.partner(p, i)
        g = self.gluings[self.gluing_index(p, i)]
        a_start = self.edge_vertices(p, i)[0]
        b_end = self.edge_vertices(q, j)[1]
        if g.kind == "translation":
            return 1, b_end - a_start
        return -1, a_start + b_end

    def cross_edge(self, p: int, i: int, z: complex, d: complex):
        """Carry point z (on edge (p,i)) and direction d into the partner
        polygon.  Returns (q, z', d')."""
        q, j = self.partner(p, i)
        sign, c = self.transition(p, i)
        return q, sign * z + c, sign * d

    # -- vertex identifications ----------------------------------------------

    def corner_angle(self, p: int, i: int) -> float:
        poly = self.polygons[p]
        n = len(poly)
        u = poly[i] - poly[i - 1]
        w = poly[(i + 1) % n] - poly[i]
        # Interior angle in [0, 2*pi); pi means a straight corner.
        return math.pi - cmath.phase(w / u)

    @cached_property
    def vertex_classes(self) -> tuple[VertexClass, ...]:
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for p, poly in enumerate(self.polygons):
            for i in range(len(poly)):
                parent[(p, i)] = (p, i)
        for g in self.gluings:
            (p, i), (q, j) = g.a, g.b
            np_, nq = self.n_sides(p), self.n_sides(q)
            union((p, i), (q, (j + 1) % nq))
            union((p, (i + 1) % np_), (q, j))

        groups: dict = {}
        for c in parent:
            groups.setdefault(find(c), []).append(c)

        puncture_roots = {find(c) for c in self.punctures}
        classes = []
        for root, corners in groups.items():
            corners = tuple(sorted(corners))
            angle = sum(self.corner_angle(p, i) for p, i in corners)
            boundary = any(
                self.is_boundary_edge(p, i) or self.is_boundary_edge(p, (i - 1) % self.n_sides(p))
                for p, i in corners
            )
            classes.append(
                VertexClass(corners, angle, boundary, root in puncture_roots)
            )
        return tuple(sorted(classes, key=lambda c: c.corners))

    @cached_property
    def _corner_class(self) -> dict:
        out = {}
        for k, cls in enumerate(self.vertex_classes):
            for c in cls.corners:
                out[c] = k
        return out

    def vertex_class_of(self, p: int, i: int) -> VertexClass:
        return self.vertex_classes[self._corner_class[(p, i)]]

    def cone_angles(self) -> dict:
        """Map from vertex class (as a corner tuple) to its total angle."""
        return {cls.corners: cls.angle for cls in self.vertex_classes}

    def next_ccw(self, corner):
        """Next corner counterclockwise around the same vertex, crossing the
        incoming edge; None at a boundary end."""
        p, i = corner
        e = (p, (i - 1) % self.n_sides(p))
        hit = self.partner(*e)
        if hit is None:
            return None
        return hit  # partner edge (q, j): its start corner is the next one

    def prev_cw(self, corner):
        p, i = corner
        hit = self.partner(p, i)
        if hit is None:
            return None
        q, j = hit
        return (q, (j + 1) % self.n_sides(q))

    def _fan_orbit(self, start):
        """Corners reached from `start` by next_ccw, in order."""
        seen = [start]
        cur = start
        while True:
            nxt = self.next_ccw(cur)
            if nxt is None or nxt == start:
                return seen, nxt == start
            if nxt in seen:
                return seen, False  # lasso, should not happen on valid input
            seen.append(nxt)
            cur = nxt

    def check_fans(self) -> list[str]:
        """Verify that corner fans close (interior) or chain (boundary)."""
        problems = []
        for cls in self.vertex_classes:
            if cls.boundary:
                starts = [c for c in cls.corners if self.partner(*c) is None]
                if len(starts) != 1:
                    problems.append(
                        f"vertex {cls.corners[0]} has {len(starts)} boundary chain starts"
                    )
                    continue
                orbit, closed = self._fan_orbit(starts[0])
                if closed or set(orbit) != set(cls.corners):
                    problems.append(f"vertex fan at {cls.corners[0]} does not chain")
            else:
                orbit, closed = self._fan_orbit(cls.corners[0])
                if not closed or set(orbit) != set(cls.corners):
                    problems.append(f"vertex fan at {cls.corners[0]} does not close")
        return problems

    # -- geometry ------------------------------------------------------------

    def polygon_area(self, p: int) -> float:
        poly = self.polygons[p]
        s = 0.0
        for i, v in enumerate(poly):
            w = poly[(i + 1) % len(poly)]
            s += v.real * w.imag - w.real * v.imag
        return 0.5 * s

    @cached_property
    def area(self) -> float:
        return sum(self.polygon_area(p) for p in range(len(self.polygons)))

    @cached_property
    def shapely_polygons(self) -> tuple[ShapelyPolygon, ...]:
        return tuple(
            ShapelyPolygon([(v.real, v.imag) for v in poly]) for poly in self.polygons
        )

    def contains_point(self, p: int, z: complex, margin: float = 0.0) -> bool:
        return self.shapely_polygons[p].buffer(margin).contains(Point(z.real, z.imag))

    @cached_property
    def euler_characteristic(self) -> int:
        v = len(self.vertex_classes)
        e = len(self.gluings) + len(self.boundary_edges)
        f = len(self.polygons)
        return v - e + f

    def gauss_bonnet_defect(self) -> float:
        """Total curvature concentrated at vertices minus 2*pi*chi."""
        total = 0.0
        for cls in self.vertex_classes:
            flat = math.pi if cls.boundary else TWO_PI
            total += flat - cls.angle
        return total - TWO_PI * self.euler_characteristic

    @cached_property
    def boundary_circles(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Boundary edges grouped into circles, each in traversal order."""
        remaining = set(self.boundary_edges)
        circles = []
        while remaining:
            start = min(remaining)
            circle = []
            e = start
            while True:
                circle.append(e)
                remaining.discard(e)
                p, i = e
                corner = (p, (i + 1) % self.n_sides(p))
                # Walk the corner fan to the outgoing unglued edge.
                guard = 0
                while self.partner(*corner) is not None:
                    corner = self.prev_cw(corner)
                    guard += 1
                    if guard > 10000:
                        raise ValidationError("boundary traversal does not terminate")
                e = corner
                if e == start:
                    break
            circles.append(tuple(circle))
        return tuple(circles)

    def circle_length(self, circle) -> float:
        return sum(abs(self.edge_vector(p, i)) for p, i in circle)

    # -- validation ----------------------------------------------------------

    def validate(self) -> ValidationReport:
        v: list[str] = []
        tol = self.tol * self.scale

        for p, poly in enumerate(self.polygons):
            if len(poly) < 3:
                v.append(f"polygon {p} has fewer than 3 vertices")
                continue
            coords = [(z.real, z.imag) for z in poly]
            ring = LinearRing(coords)
            if not ring.is_valid:
                v.append(f"polygon {p} is not simple")
                continue
            if not ring.is_ccw:
                v.append(f"polygon {p} is not counterclockwise")
            if self.polygon_area(p) <= tol:
                v.append(f"polygon {p} has nonpositive area")

        if v:
            return ValidationReport(False, v)

        seen_sides: set = set()
        for k, g in enumerate(self.gluings):
            for side in (g.a, g.b):
                p, i = side
                if not (0 <= p < len(self.polygons)) or not (0 <= i < self.n_sides(p)):
                    v.append(f"gluing {k} references missing edge {side}")
                elif side in seen_sides:
                    v.append(f"edge {side} appears in more than one gluing")
                seen_sides.add(side)
            if g.a == g.b:
                v.append(f"gluing {k} identifies edge {g.a} with itself")
            if g.kind not in ("translation", "halfturn"):
                v.append(f"gluing {k} has unknown type {g.kind!r}")
        if v:
            return ValidationReport(False, v)

        for k, g in enumerate(self.gluings):
            va = self.edge_vector(*g.a)
            vb = self.edge_vector(*g.b)
            if abs(abs(va) - abs(vb)) > tol:
                v.append(f"edge length mismatch in gluing {k}: {abs(va)} vs {abs(vb)}")
                continue
            mismatch = abs(va + vb) if g.kind == "translation" else abs(va - vb)
            if mismatch > tol:
                v.append(f"edge direction incompatible with {g.kind} in gluing {k}")

        for p, i in self.punctures:
            if not (0 <= p < len(self.polygons)) or not (0 <= i < self.n_sides(p)):
                v.append(f"puncture reference ({p}, {i}) is out of range")
        if v:
            return ValidationReport(False, v)

        for cls in self.vertex_classes:
            if cls.puncture and cls.boundary:
                v.append(f"puncture at {cls.corners[0]} lies on the boundary")

        v.extend(self.check_fans())

        # Cone angle census.  Interior angles must be 2*pi or k*pi (k >= 3),
        # punctures k*pi (k >= 1), boundary vertices k*pi/2 (k >= 1) with pi
        # being a straight boundary point.
        for cls in self.vertex_classes:
            a = cls.angle
            where = f"vertex {cls.corners[0]}"
            if cls.boundary:
                k = a / (math.pi / 2)
                if abs(k - round(k)) > ANGLE_TOL * 10 or round(k) < 1:
                    v.append(f"{where}: boundary angle {a} is not a multiple of pi/2")
            elif cls.puncture:
                k = a / math.pi
                if abs(k - round(k)) > ANGLE_TOL or round(k) < 1:
                    v.append(f"{where}: puncture angle {a} is not k*pi with k >= 1")
            else:
                k = a / math.pi
                ok = abs(a - TWO_PI) < ANGLE_TOL or (
                    abs(k - round(k)) < ANGLE_TOL and round(k) >= 3
                )
                if not ok:
                    v.append(f"{where}: interior angle {a} is neither 2*pi nor k*pi, k >= 3")

        if self.area <= tol:
            v.append("total area is not positive")

        if abs(self.gauss_bonnet_defect()) > ANGLE_TOL * max(
            1, len(self.vertex_classes)
        ):
            v.append("vertex angles are inconsistent with the Euler characteristic")

        return ValidationReport(not v, v)

    def require_valid(self):
        report = self.validate()
        if not report.ok:
            raise ValidationError("; ".join(report.violations))
        return self

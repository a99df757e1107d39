"""Certified interval bounds on extremal length.

The exact case is a surface that decomposes into flat cylinders whose cores
realize the curve (heights proportional to weights); everything else is
bracketed between metric lower bounds and embedded-annulus upper bounds,
optionally sharpened by finite-element certificates attached to the surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import curves as curvelib
from . import geodesics
from .curves import MultiCurve, canonical_class
from .cylinders import (
    cylinder_decomposition,
    maximal_embedded_strip,
    trace_closed_leaf,
)
from .errors import (
    Inconclusive,
    InputError,
    NotJSForCurve,
    NotPeriodic,
    ValidationError,
)
from .mesh import build_mesh, jump_energy, plate_energy, signed_cut_crossings

# Numerical bounds get a one-sided haircut so solver roundoff can never
# flip a certified inequality; closed-form cylinder values stay exact.
LOWER_SAFETY = 1.0 - 1e-9
UPPER_SAFETY = 1.0 + 1e-9


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


@dataclass(frozen=True)
class ELInterval:
    """Two-sided bracket [lower, upper] for one extremal length."""

    lower: float
    upper: float
    lower_witness: dict | None = None
    upper_witness: dict | None = None
    refinement_level: int = 0

    def __post_init__(self):
        if not (self.lower >= 0.0):
            raise ValidationError(f"negative lower bound {self.lower}")
        if self.lower > self.upper * (1 + 1e-12) + 1e-12:
            raise ValidationError(
                f"crossed bounds: lower {self.lower} > upper {self.upper}"
            )

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    @property
    def exact(self) -> bool:
        return self.upper - self.lower <= 1e-9 * max(1.0, abs(self.upper))

    @property
    def midpoint(self) -> float:
        if math.isinf(self.upper):
            return self.lower
        return 0.5 * (self.lower + self.upper)


def _normalize_direction(d: complex) -> complex:
    """Fold d and -d together; unit modulus, upper half plane."""
    d = d / abs(d)
    if d.imag < -1e-12 or (abs(d.imag) <= 1e-12 and d.real < 0):
        d = -d
    return d


def _as_direction(direction) -> complex:
    if isinstance(direction, (tuple, list)):
        d = complex(direction[0], direction[1])
    else:
        d = complex(direction)
    if abs(d) == 0:
        raise InputError("direction must be nonzero")
    return d / abs(d)


def _core_words(surface, deco):
    """Canonical crossing word of each cylinder's mid leaf."""
    words = []
    for cyl in deco.cylinders:
        band = deco.bands[cyl.bands[0]]
        z = band.entry[1] + 0.5 * band.chord * deco.direction
        crossings, _, _ = trace_closed_leaf(surface, band.poly, z, deco.direction)
        words.append(canonical_class(surface, crossings, "loop"))
    return words


def _locate_cylinder(surface, deco, rep):
    """Cylinder index holding a straight tightened representative, or None."""
    d = rep.straight_direction(surface)
    if d is None:
        return None
    if abs(_normalize_direction(d) - _normalize_direction(deco.direction)) > 1e-9:
        return None
    p0, z0, _ = rep.segments[0]
    bi = deco.locate(p0, _cross(deco.direction, z0), 0.0)
    if bi is None:
        return None
    return deco.band_cylinder[bi]


def el_cylinder(surface, curve: MultiCurve, direction) -> ELInterval:
    """Exact extremal length when the surface is the flat realization of the
    curve: the decomposition in `direction` must consist of one cylinder per
    component, with heights in a common ratio to the weights.

    Raises NotJSForCurve on any mismatch.
    """
    d = _as_direction(direction)
    c = curvelib.reduce(surface, curve)
    if len(c) == 0:
        raise NotJSForCurve("empty curve has no cylinder realization")
    for comp in c:
        if comp.kind != "loop":
            raise NotJSForCurve("cylinder realization needs closed components")
    try:
        deco = cylinder_decomposition(surface, d)
    except (NotPeriodic, Inconclusive) as e:
        raise NotJSForCurve(f"no cylinder decomposition in this direction: {e}")

    words = _core_words(surface, deco)
    matched: dict[int, object] = {}
    for comp in c:
        cls = canonical_class(surface, comp.crossings, comp.kind)
        ci = None
        for j, w in enumerate(words):
            if w == cls:
                ci = j
                break
        if ci is None:
            # The component may be isotopic to a core while crossing a
            # different edge sequence; accept a straight representative
            # located inside a cylinder, reject anything degenerate.
            rep = geodesics.tighten(surface, comp.crossings, comp.kind, comp.params)
            if not rep.degenerate:
                ci = _locate_cylinder(surface, deco, rep)
        if ci is None:
            raise NotJSForCurve(
                "component is not isotopic to a cylinder core of this direction"
            )
        if ci in matched:
            raise NotJSForCurve("two components land on the same cylinder")
        matched[ci] = comp
    if len(matched) != len(deco.cylinders):
        raise NotJSForCurve(
            f"curve covers {len(matched)} of {len(deco.cylinders)} cylinders"
        )

    ratios = [deco.cylinders[ci].height / comp.weight for ci, comp in matched.items()]
    if max(ratios) - min(ratios) > 1e-9 * max(ratios):
        raise NotJSForCurve("cylinder heights are not proportional to weights")

    value = 0.0
    strips = []
    for ci, comp in matched.items():
        cyl = deco.cylinders[ci]
        value += comp.weight**2 * cyl.circumference / cyl.height
        strips.append(
            {
                "length": cyl.circumference,
                "width": cyl.height,
                "weight": comp.weight,
            }
        )
    lw = {
        "method": "cylinder-metric",
        "direction": [deco.direction.real, deco.direction.imag],
        "cylinders": strips,
    }
    uw = {"method": "cylinder-annuli", "strips": strips}
    return ELInterval(value, value, lw, uw, 0)


def _weighted_tighten_length(surface, crossings, kind, params, rho):
    """Infimum of the per-polygon weighted length over the crossing class,
    by coordinate descent with exact 1-d golden-section steps (each
    coordinate objective is convex)."""
    chain = geodesics._Chain(surface, crossings, kind)
    k = chain.k
    t = [0.5] * k if params is None else [min(1.0, max(0.0, float(x))) for x in params]

    def total(tv):
        out = 0.0
        for jp, j in chain.terms():
            e0, ev = chain.entry_affine(jp)
            w = rho[chain.crossings[j][0]]
            out += w * abs(chain.A[j] + tv[j] * chain.V[j] - e0 - tv[jp] * ev)
        return out

    def minimize_coord(j):
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = 0.0, 1.0
        x1 = b - invphi * (b - a)
        x2 = a + invphi * (b - a)

        def f(x):
            t[j] = x
            return total(t)

        f1, f2 = f(x1), f(x2)
        for _ in range(80):
            if f1 < f2:
                b, x2, f2 = x2, x1, f1
                x1 = b - invphi * (b - a)
                f1 = f(x1)
            else:
                a, x1, f1 = x1, x2, f2
                x2 = a + invphi * (b - a)
                f2 = f(x2)
        t[j] = 0.5 * (a + b)

    prev = total(t)
    for _ in range(400):
        for j in range(k):
            minimize_coord(j)
        cur = total(t)
        if prev - cur < 1e-13 * max(1.0, prev):
            return cur
        prev = cur
    return prev


def el_lower_metric(surface, curve: MultiCurve, density=None) -> float:
    """Lower bound length(curve)^2 / area from one competitor metric.

    `density` is an optional per-polygon scale list (default: the flat
    metric, density 1 everywhere).  Lengths are minimized over each
    component's crossing class; a class whose minimum leaves the given
    crossing sequence is charged the in-sequence minimum, so supply curves
    in their shortest position.
    """
    c = curvelib.reduce(surface, curve)
    n = len(surface.polygons)
    if density is None:
        rho = [1.0] * n
    else:
        rho = [float(x) for x in density]
        if len(rho) != n:
            raise InputError("density needs one scale per polygon")
        if any(x < 0 for x in rho):
            raise InputError("density must be nonnegative")
    area = sum(r * r * surface.polygon_area(p) for p, r in enumerate(rho))
    if area <= 0:
        raise InputError("competitor metric has zero area")
    if len(c) == 0:
        return 0.0
    total = 0.0
    for comp in c:
        if density is None:
            rep = geodesics.tighten(surface, comp.crossings, comp.kind, comp.params)
            total += comp.weight * rep.length
        else:
            total += comp.weight * _weighted_tighten_length(
                surface, comp.crossings, comp.kind, comp.params, rho
            )
    return total * total / area


def _annuli_system(surface, curve: MultiCurve):
    """Disjoint embedded strips around the tightened components.

    Returns (value, witness).  Obstructed cases (degenerate geodesics,
    components in more than one direction, no decomposition) give
    value = +inf with the reason in the witness.
    """

    def blocked(note):
        return math.inf, {"method": "embedded-strips", "note": note}

    reps = []
    for comp in curve:
        if comp.kind != "loop":
            raise InputError("annulus bounds are defined for closed components")
        rep = geodesics.tighten(surface, comp.crossings, comp.kind, comp.params)
        if rep.degenerate:
            return blocked("a geodesic representative runs into a vertex")
        d = rep.straight_direction(surface)
        if d is None:
            return blocked("a geodesic representative is not a straight leaf")
        reps.append((comp, rep, _normalize_direction(d)))

    if not reps:
        return blocked("no components")
    d0 = reps[0][2]
    if any(abs(d - d0) > 1e-9 for _, _, d in reps):
        return blocked("components span more than one direction")
    try:
        deco = cylinder_decomposition(surface, d0)
    except (NotPeriodic, Inconclusive) as e:
        return blocked(f"no cylinder decomposition: {e}")

    # Components sharing a cylinder are parallel; pooling their weights and
    # splitting the strip in proportion is optimal, and the pooled bound is
    # weight^2 * length / width.
    pooled: dict[int, list] = {}
    for comp, rep, _ in reps:
        ci = _locate_cylinder(surface, deco, rep)
        if ci is None:
            return blocked("a geodesic runs along a singular leaf")
        pooled.setdefault(ci, [0.0, rep])
        pooled[ci][0] += comp.weight

    value = 0.0
    strips = []
    for ci, (weight, rep) in pooled.items():
        cyl = deco.cylinders[ci]
        strip = maximal_embedded_strip(surface, rep)
        if strip.width <= 0:
            return blocked(strip.note or "no embedded strip")
        value += weight**2 * cyl.circumference / strip.width
        strips.append(
            {
                "length": cyl.circumference,
                "width": strip.width,
                "weight": weight,
            }
        )
    return value, {"method": "embedded-strips", "strips": strips}


def el_upper_annuli(surface, curve: MultiCurve) -> float:
    """Upper bound sum(weight_i^2 * length_i / width_i) over disjoint
    embedded strips; +inf when no strip system exists."""
    c = curvelib.reduce(surface, curve)
    if len(c) == 0:
        return 0.0
    value, _ = _annuli_system(surface, c)
    return value


def collar_lower_bound(surface, k: float = 1.0) -> float:
    """Lower bound from the graded collar metric exp(-k x).

    Certifies the class that winds once around the folded left end of a
    stack of [0,t] x height-1 rectangles whose total vertical period is 4
    (the reflection axes sit 2 apart).  Unfolding the collar into a strip
    turns every representative into a chord between boundary points at
    vertical gap 2, of conformal length at least (2/k) sin(k); the area
    integral is taken over the actual polygons.  Requires 0 < k <= pi/2 so
    the chord bound is monotone on the gap.
    """
    k = float(k)
    if not (0 < k <= math.pi / 2):
        raise InputError("collar grading needs 0 < k <= pi/2")
    heights = 0.0
    area = 0.0
    x_ranges = set()
    for p in range(len(surface.polygons)):
        verts = surface.polygons[p]
        xs = [v.real for v in verts]
        ys = [v.imag for v in verts]
        x0, x1 = min(xs), max(xs)
        if len(verts) != 4 or abs(surface.polygon_area(p) - (x1 - x0) * (max(ys) - min(ys))) > 1e-9:
            raise InputError("collar certificate needs axis-aligned rectangles")
        x_ranges.add((round(x0, 12), round(x1, 12)))
        heights += max(ys) - min(ys)
        area += (max(ys) - min(ys)) * (math.exp(-2 * k * x0) - math.exp(-2 * k * x1)) / (2 * k)
    if len(x_ranges) != 1 or min(r[0] for r in x_ranges) != 0:
        raise InputError("collar certificate needs a common [0,t] base interval")
    if abs(heights - 4.0) > 1e-9:
        raise InputError("collar certificate is calibrated for vertical period 4")
    length = (2.0 / k) * math.sin(k)
    return length * length / area


def _match_named(surface, comp):
    """Name of the sole named curve in the same crossing class, or None."""
    cls = canonical_class(surface, comp.crossings, comp.kind)
    for name, named in surface.named_curves.items():
        if len(named) != 1:
            continue
        ncomp = named.components[0]
        if ncomp.kind != comp.kind:
            continue
        if canonical_class(surface, ncomp.crossings, ncomp.kind) == cls:
            return name
    return None


def _plate_dofs(mesh, items):
    dofs = set()
    for it in items:
        if it == "boundary":
            dofs |= set(mesh.boundary_dofs())
        elif isinstance(it, (tuple, list)) and len(it) == 2 and it[0] == "gluing":
            dofs |= mesh.gluing_dofs(int(it[1]))
        else:
            raise InputError(f"unknown plate item {it!r}")
    return dofs


def _recipe_candidates(surface, comp, level):
    """(lower, lower_witness, upper, upper_witness) from the surface's
    attached finite-element recipes, for a single-component curve."""
    lo, lw, hi, uw = 0.0, None, math.inf, None
    name = _match_named(surface, comp)
    recipe = surface.fem_recipes.get(name) if name else None
    if not recipe:
        return lo, lw, hi, uw
    a2 = comp.weight**2

    lower_spec = recipe.get("lower") or {}
    if "collar" in lower_spec:
        v = a2 * collar_lower_bound(surface, **lower_spec["collar"]) * LOWER_SAFETY
        if v > lo:
            lo, lw = v, {
                "method": "graded-collar",
                "curve": name,
                **lower_spec["collar"],
            }
    if "cuts" in lower_spec:
        cuts = tuple(lower_spec["cuts"])
        nvec = signed_cut_crossings(surface, MultiCurve((comp,)), cuts)
        # The weighted crossings already carry the weight, so the reciprocal
        # energy bounds the weighted class directly.
        for lv in range(level + 1):
            mesh = build_mesh(surface, lv, cuts)
            res = jump_energy(mesh, nvec)
            if res is not None and res.energy > 0:
                v = (1.0 / res.energy) * LOWER_SAFETY
                if v > lo:
                    lo, lw = v, {
                        "method": "harmonic-jump",
                        "curve": name,
                        "cuts": list(cuts),
                        "level": lv,
                        "energy": res.energy,
                    }

    upper_spec = recipe.get("upper") or {}
    if "plate0" in upper_spec:
        for lv in range(level + 1):
            mesh = build_mesh(surface, lv)
            e = plate_energy(
                mesh,
                _plate_dofs(mesh, upper_spec["plate0"]),
                _plate_dofs(mesh, upper_spec["plate1"]),
            )
            v = a2 * e * UPPER_SAFETY
            if v < hi:
                hi, uw = v, {
                    "method": "plate-capacity",
                    "curve": name,
                    "level": lv,
                    "energy": e,
                }
    return lo, lw, hi, uw


def el_interval(surface, curve: MultiCurve, level: int = 0) -> ELInterval:
    """Best certified bracket at the given refinement level.

    Exact on cylinder-realized curves; otherwise the lower bound is the best
    of the flat metric and any attached collar or cut certificate, the upper
    bound the best of embedded strips and any attached plate certificate.
    Finite-element candidates are evaluated at every level up to `level`, so
    brackets never widen as the level grows.
    """
    level = int(level)
    if level < 0:
        raise InputError("refinement level must be nonnegative")
    c = curvelib.reduce(surface, curve)
    if len(c) == 0:
        empty = {"method": "empty-curve"}
        return ELInterval(0.0, 0.0, empty, empty, level)

    for d in surface.periodic_directions:
        try:
            exact = el_cylinder(surface, c, d)
        except NotJSForCurve:
            continue
        return replace(exact, refinement_level=level)

    flat = el_lower_metric(surface, c)
    lower = flat * LOWER_SAFETY
    lw = {"method": "flat-metric", "value": flat}

    upper, uw = math.inf, None
    if all(comp.kind == "loop" for comp in c):
        strips_val, strips_w = _annuli_system(surface, c)
        if math.isfinite(strips_val):
            upper, uw = strips_val * UPPER_SAFETY, strips_w
        else:
            uw = strips_w

    if len(c) == 1:
        rlo, rlw, rhi, ruw = _recipe_candidates(surface, c.components[0], level)
        if rlo > lower:
            lower, lw = rlo, rlw
        if rhi < upper:
            upper, uw = rhi, ruw

    return ELInterval(lower, upper, lw, uw, level)


def el_quadratic_scaling_check(surface, curve: MultiCurve, k, level: int = 0) -> bool:
    """True when scaling every weight by k scales both bounds by k^2."""
    k = float(k)
    if k <= 0:
        raise InputError("scale factor must be positive")
    base = el_interval(surface, curve, level)
    scaled = el_interval(surface, curvelib.scale(curve, k), level)
    k2 = k * k
    tol = max(surface.tol, 1e-9)

    def close(x, y):
        if math.isinf(x) or math.isinf(y):
            return math.isinf(x) and math.isinf(y)
        return abs(x - y) <= tol * max(1.0, abs(x), abs(y))

    return close(scaled.lower, k2 * base.lower) and close(scaled.upper, k2 * base.upper)

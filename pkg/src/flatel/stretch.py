"""Subsurface embeddings and certified stretch-factor bounds.

An embedding places every domain polygon into a codomain polygon by an
orientation-preserving affine map.  Validation is geometric: images must
sit inside their hosts with pairwise disjoint interiors, and every domain
gluing must either become a seam interior to one host polygon or land on
a codomain gluing.  Lower bounds on the stretch factor come from curve
candidates (image extremal length over domain extremal length), upper
bounds from quasiconformal dilatation of the placement maps or from the
pigeonhole bound for n mutually disjoint conformal re-embeddings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from shapely import affinity
from shapely.geometry import LineString, Point, Polygon as ShapelyPolygon
from shapely.ops import unary_union

from . import curves as curvelib
from .covers import CoverSpec, build_cover, cover_embedding, pullback_curve
from .curves import (
    BranchWeights,
    Component,
    MultiCurve,
    canonical_class,
    pushforward_reduce,
    switch_check,
    weights_to_multicurve,
)
from .cylinders import cylinder_decomposition, trace_closed_leaf
from .errors import InputError, NotLoose, ValidationError
from .extremal import el_interval
from .surface import FlatSurface


@dataclass(frozen=True)
class Placement:
    """Affine map z = x + iy -> M (x, y) + offset into polygon `host`."""

    host: int
    matrix: tuple[tuple[float, float], tuple[float, float]] = ((1.0, 0.0), (0.0, 1.0))
    offset: complex = 0j

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        m = ((float(a), float(b)), (float(c), float(d)))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "offset", complex(self.offset))
        object.__setattr__(self, "host", int(self.host))
        if self.det <= 0:
            raise ValidationError(
                f"placement map must preserve orientation, det = {self.det}"
            )

    @property
    def det(self) -> float:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def apply(self, z: complex) -> complex:
        (a, b), (c, d) = self.matrix
        x, y = z.real, z.imag
        return complex(a * x + b * y, c * x + d * y) + self.offset

    def apply_direction(self, z: complex) -> complex:
        (a, b), (c, d) = self.matrix
        x, y = z.real, z.imag
        return complex(a * x + b * y, c * x + d * y)

    def singular_values(self) -> tuple[float, float]:
        (a, b), (c, d) = self.matrix
        e, f = (a + d) / 2.0, (a - d) / 2.0
        g, h = (c + b) / 2.0, (c - b) / 2.0
        q, r = math.hypot(e, h), math.hypot(f, g)
        return q + r, abs(q - r)

    def is_similarity(self, tol: float = 1e-9) -> bool:
        (a, b), (c, d) = self.matrix
        m = max(1.0, abs(a), abs(b), abs(c), abs(d))
        return abs(a - d) <= tol * m and abs(b + c) <= tol * m


def _dist_to_segment(z: complex, a: complex, b: complex) -> float:
    v = b - a
    t = ((z - a) * v.conjugate()).real / abs(v) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * v))


class SubsurfaceEmbedding:
    """Validated placement of one flat surface inside another.

    `strict` and `annular` are computed from the geometry (an omitted disk
    in every codomain component, and an in-chart collar strip outward of
    every image boundary edge).  The collar search does not follow
    codomain gluings, so `annular` is conservative: False may be reported
    for embeddings whose collars continue into a neighboring chart.
    """

    def __init__(self, domain, codomain, placements, strict=None, annular=None, tol=None):
        self.domain: FlatSurface = domain
        self.codomain: FlatSurface = codomain
        self.placements = tuple(
            pl if isinstance(pl, Placement) else Placement(*pl) for pl in placements
        )
        self.tol = float(tol) if tol is not None else max(domain.tol, codomain.tol)
        self._eps = max(self.tol * codomain.scale, 1e-12)
        self._edge_image: dict = {}
        self._gluing_status: dict = {}
        self._images = None
        self._validate()
        self.strict = self._compute_strict()
        self.annular, self.collar_width = self._compute_annular()
        for name, given, computed in (
            ("strict", strict, self.strict),
            ("annular", annular, self.annular),
        ):
            if given is not None and bool(given) != computed:
                raise ValidationError(
                    f"{name} flag given as {given} but the geometry says {computed}"
                )

    # -- construction checks --------------------------------------------------

    def _validate(self):
        R, S = self.domain, self.codomain
        if len(self.placements) != len(R.polygons):
            raise ValidationError("one placement per domain polygon required")
        eps = self._eps
        images = []
        for r, pl in enumerate(self.placements):
            if not 0 <= pl.host < len(S.polygons):
                raise ValidationError(f"placement {r} names unknown host {pl.host}")
            pts = [pl.apply(v) for v in R.polygons[r]]
            shape = ShapelyPolygon([(z.real, z.imag) for z in pts])
            host_shape = S.shapely_polygons[pl.host]
            if not host_shape.buffer(eps).covers(shape):
                raise ValidationError(
                    f"image of polygon {r} is not contained in host {pl.host}"
                )
            images.append(shape)
        self._images = tuple(images)

        area_tol = max(eps * S.scale, 1e-12 * S.scale**2)
        for r1 in range(len(images)):
            for r2 in range(r1 + 1, len(images)):
                if self.placements[r1].host != self.placements[r2].host:
                    continue
                if images[r1].intersection(images[r2]).area > area_tol:
                    raise ValidationError(
                        f"images of polygons {r1} and {r2} overlap"
                    )

        for (p, i) in R.all_edges():
            self._edge_image[(p, i)] = self._classify_edge(p, i)
        for k in range(len(R.gluings)):
            self._gluing_status[k] = self._classify_gluing(k)

    def _classify_edge(self, p: int, i: int):
        S = self.codomain
        pl = self.placements[p]
        a, b = self.domain.edge_vertices(p, i)
        za, zb = pl.apply(a), pl.apply(b)
        host = S.polygons[pl.host]
        for j in range(len(host)):
            ea, eb = S.edge_vertices(pl.host, j)
            if (
                _dist_to_segment(za, ea, eb) <= self._eps
                and _dist_to_segment(zb, ea, eb) <= self._eps
            ):
                return ("edge", (pl.host, j))
        return ("chord",)

    def _classify_gluing(self, k: int):
        R, S = self.domain, self.codomain
        g = R.gluings[k]
        (pa, ia), (pb, ib) = tuple(g.a), tuple(g.b)
        sa, sb = self._edge_image[(pa, ia)], self._edge_image[(pb, ib)]
        place_a, place_b = self.placements[pa], self.placements[pb]

        def sampled(transform):
            for t in (0.0, 0.5, 1.0):
                za = place_a.apply(R.edge_point(pa, ia, t))
                zb = place_b.apply(R.edge_point(pb, ib, 1.0 - t))
                if abs(transform(za) - zb) > 10 * self._eps:
                    return False
            return True

        if sa[0] == "chord" and sb[0] == "chord":
            if place_a.host != place_b.host:
                raise ValidationError(
                    f"gluing {k} maps to a seam between different hosts"
                )
            if not sampled(lambda z: z):
                raise ValidationError(f"gluing {k} is torn apart inside its host")
            return ("interior", place_a.host)
        if sa[0] == "edge" and sb[0] == "edge":
            qa, ja = sa[1]
            ks = S.gluing_index(qa, ja)
            if ks is None or S.partner(qa, ja) != sb[1]:
                raise ValidationError(
                    f"gluing {k} lands on codomain edges that are not glued"
                )
            sign, c = S.transition(qa, ja)
            if not sampled(lambda z: sign * z + c):
                raise ValidationError(
                    f"gluing {k} disagrees with the codomain identification"
                )
            aligned = (qa, ja) == tuple(S.gluings[ks].a)
            return ("carried", ks, aligned)
        raise ValidationError(
            f"gluing {k} maps one side onto a codomain edge and the other inside"
        )

    def _components(self):
        S = self.codomain
        parent = list(range(len(S.polygons)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in S.gluings:
            a, b = find(g.a[0]), find(g.b[0])
            if a != b:
                parent[a] = b
        groups = {}
        for q in range(len(S.polygons)):
            groups.setdefault(find(q), []).append(q)
        return list(groups.values())

    def _compute_strict(self) -> bool:
        S = self.codomain
        radius = max(self._eps, 1e-9 * S.scale)
        by_host = {}
        for r, img in enumerate(self._images):
            by_host.setdefault(self.placements[r].host, []).append(img)
        for comp in self._components():
            free = unary_union([S.shapely_polygons[q] for q in comp])
            used = [img for q in comp for img in by_host.get(q, [])]
            if used:
                free = free.difference(unary_union(used))
            if free.buffer(-radius).is_empty:
                return False
        return True

    def _compute_annular(self):
        R, S = self.domain, self.codomain
        boundary = [e for e in R.all_edges() if R.is_boundary_edge(*e)]
        if not boundary:
            return True, None
        area_tol = max(self._eps * S.scale, 1e-12 * S.scale**2)
        width = math.inf
        for (p, i) in boundary:
            pl = self.placements[p]
            a, b = R.edge_vertices(p, i)
            za, zb = pl.apply(a), pl.apply(b)
            out = -1j * (zb - za) / abs(zb - za)
            host_shape = S.shapely_polygons[pl.host].buffer(self._eps)
            found = None
            delta = 0.25 * S.scale
            for _ in range(20):
                quad = ShapelyPolygon(
                    [
                        (za.real, za.imag),
                        (zb.real, zb.imag),
                        ((zb + delta * out).real, (zb + delta * out).imag),
                        ((za + delta * out).real, (za + delta * out).imag),
                    ]
                )
                if host_shape.covers(quad) and all(
                    quad.intersection(img).area <= area_tol
                    for r, img in enumerate(self._images)
                    if self.placements[r].host == pl.host
                ):
                    found = delta
                    break
                delta *= 0.5
            if found is None:
                return False, None
            width = min(width, found)
        return True, width

    # -- queries ---------------------------------------------------------------

    def edge_image(self, p: int, i: int):
        return self._edge_image[(p, i)]

    def gluing_status(self, k: int):
        return self._gluing_status[k]

    def apply_point(self, r: int, z: complex):
        pl = self.placements[r]
        return pl.host, pl.apply(z)

    @property
    def is_conformal(self) -> bool:
        return all(pl.is_similarity() for pl in self.placements)

    def image_shapes(self):
        return self._images


def identity_embedding(surface: FlatSurface) -> SubsurfaceEmbedding:
    return SubsurfaceEmbedding(
        surface, surface, [Placement(r) for r in range(len(surface.polygons))]
    )


def compose_embeddings(outer: SubsurfaceEmbedding, inner: SubsurfaceEmbedding):
    """The embedding `outer after inner`."""
    if inner.codomain is not outer.domain:
        raise InputError("embeddings do not compose: codomain/domain mismatch")
    placements = []
    for pl_in in inner.placements:
        pl_out = outer.placements[pl_in.host]
        (a, b), (c, d) = pl_out.matrix
        (e, f), (g, h) = pl_in.matrix
        m = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        placements.append(Placement(pl_out.host, m, pl_out.apply(pl_in.offset)))
    return SubsurfaceEmbedding(inner.domain, outer.codomain, placements)


@dataclass(frozen=True)
class StretchBound:
    """Certified bracket for a stretch factor with its witnesses."""

    lower: float = 0.0
    upper: float = math.inf
    lower_witness: dict | None = None
    upper_kind: str = "none"  # "qc-constant" | "n-loose" | "none"

    def __post_init__(self):
        if self.lower < 0:
            raise ValidationError("stretch lower bound must be nonnegative")
        if math.isfinite(self.upper) and self.lower > self.upper * (1 + 1e-12) + 1e-12:
            raise ValidationError(
                f"inconsistent stretch bounds: {self.lower} > {self.upper}"
            )


def sf_lower(e: SubsurfaceEmbedding, candidates, level: int = 0) -> StretchBound:
    """Best certified lower bound over the candidate curves.

    Each candidate contributes image-EL lower over domain-EL upper; a
    candidate whose image reduces to nothing contributes 0, and one whose
    domain upper bound is unavailable is skipped.
    """
    if not candidates:
        raise InputError("sf_lower needs at least one candidate curve")
    best, witness = 0.0, None
    for idx, cand in enumerate(candidates):
        c = curvelib.reduce(e.domain, cand)
        if not len(c):
            continue
        dom_iv = el_interval(e.domain, c, level)
        image = pushforward_reduce(e, c)
        if not len(image):
            ratio, img_iv = 0.0, None
        elif not math.isfinite(dom_iv.upper) or dom_iv.upper <= 0:
            continue
        else:
            img_iv = el_interval(e.codomain, image, level)
            ratio = img_iv.lower / dom_iv.upper
        if witness is None or ratio > best:
            best = ratio
            witness = {
                "candidate": idx,
                "domain_el": (dom_iv.lower, dom_iv.upper),
                "image_el": None if img_iv is None else (img_iv.lower, img_iv.upper),
            }
    return StretchBound(lower=best, lower_witness=witness)


def enumerate_candidates(track, height: int):
    """All reduced carried multicurves with branch weights up to `height`."""
    height = int(height)
    if height < 0:
        raise InputError("height must be nonnegative")
    n = len(track.branches)
    if (height + 1) ** n > 10**6:
        raise InputError(
            f"candidate lattice has more than 1e6 points for height {height}"
        )
    out, seen = [], set()
    for w in product(range(height + 1), repeat=n):
        if not any(w):
            continue
        bw = BranchWeights(w, tag="integral")
        if not switch_check(track, bw):
            continue
        mc = weights_to_multicurve(track, bw)
        if not len(mc):
            continue
        key = tuple(
            sorted(
                (c.kind, canonical_class(track.surface, c.crossings, c.kind), c.weight)
                for c in mc
            )
        )
        if key in seen:
            continue
        seen.add(key)
        out.append(mc)
    return out


def default_candidates(surface: FlatSurface, track=None, height: int = 2):
    """Stock candidate set: carried multicurves of a taut track (when one
    is given) plus one core loop per cylinder of every recorded periodic
    direction, deduplicated by crossing class."""
    cands = list(enumerate_candidates(track, height)) if track is not None else []
    for d in surface.periodic_directions:
        deco = cylinder_decomposition(surface, d)
        for cyl in deco.cylinders:
            band = deco.bands[cyl.bands[0]]
            z = 0.5 * (band.entry[1] + band.exit[1])
            crossings, params, _ = trace_closed_leaf(surface, band.poly, z, d)
            cands.append(
                MultiCurve(
                    (Component("loop", tuple(crossings), 1.0, tuple(params)),)
                )
            )
    out, seen = [], set()
    for mc in cands:
        key = tuple(
            sorted(
                (c.kind, canonical_class(surface, c.crossings, c.kind), c.weight)
                for c in mc
            )
        )
        if key not in seen:
            seen.add(key)
            out.append(mc)
    return out


def sf_upper_qc(e: SubsurfaceEmbedding) -> float:
    """Quasiconformal dilatation of the worst placement map."""
    worst = 1.0
    for r, pl in enumerate(e.placements):
        if pl.is_similarity():
            continue
        smax, smin = pl.singular_values()
        if smin <= 1e-12 * smax:
            raise InputError(f"placement map of polygon {r} is degenerate")
        worst = max(worst, smax / smin)
    return worst


def _class_signature(surface, mc: MultiCurve):
    return tuple(
        sorted(
            (c.kind, canonical_class(surface, c.crossings, c.kind), c.weight)
            for c in mc
        )
    )


def sf_upper_loose(fs) -> float:
    """1 - 1/n for n homotopic conformal embeddings with disjoint closures.

    Homotopy agreement is checked by comparing pushforwards of the
    domain's named loops; the emptiness of the common closure is checked
    chart-by-chart with tol-inflated images, including along codomain
    gluings (both sides unfolded into one chart) and at vertex classes.
    """
    n = len(fs)
    if n < 2:
        raise InputError("the loose bound needs at least two embeddings")
    R, S = fs[0].domain, fs[0].codomain
    for e in fs:
        if e.domain is not R or e.codomain is not S:
            raise InputError("all embeddings must share one domain and codomain")
        if not e.is_conformal:
            raise InputError("the loose bound needs conformal (similarity) placements")

    generators = {
        name: mc
        for name, mc in R.named_curves.items()
        if all(c.kind == "loop" for c in mc)
    }
    if not generators:
        raise InputError("domain has no named loops to compare homotopy classes")
    for name, gen in generators.items():
        signatures = {
            _class_signature(S, pushforward_reduce(e, gen)) for e in fs
        }
        if len(signatures) > 1:
            raise InputError(
                f"embeddings disagree on the pushforward of {name!r}; "
                "the loose bound needs one homotopy class"
            )

    infl = max(S.tol * S.scale, 1e-12)
    area_tol = 1e-12 * max(1.0, S.scale**2)
    unions = []
    for e in fs:
        by_host = {}
        for r, img in enumerate(e.image_shapes()):
            by_host.setdefault(e.placements[r].host, []).append(img)
        unions.append({q: unary_union(v).buffer(infl) for q, v in by_host.items()})

    def empty_in(shapes):
        common = None
        for sh in shapes:
            if sh is None:
                return True
            common = sh if common is None else common.intersection(sh)
            if common.is_empty or common.area <= area_tol:
                return True
        return common.is_empty or common.area <= area_tol

    for q in range(len(S.polygons)):
        if not empty_in([u.get(q) for u in unions]):
            raise NotLoose(f"images share interior points in polygon {q}")

    for k, g in enumerate(S.gluings):
        (qa, ja) = tuple(g.a)
        (qb, _jb) = tuple(g.b)
        sign, c = S.transition(qb, _jb)  # chart qb -> chart qa
        mapped = []
        for u in unions:
            parts = []
            if qa in u:
                parts.append(u[qa])
            if qb in u:
                parts.append(
                    affinity.affine_transform(
                        u[qb], [sign, 0, 0, sign, c.real, c.imag]
                    )
                )
            mapped.append(unary_union(parts) if parts else None)
        ea, eb = S.edge_vertices(qa, ja)
        band = LineString([(ea.real, ea.imag), (eb.real, eb.imag)]).buffer(4 * infl)
        if not empty_in([None if m is None else m.intersection(band) for m in mapped]):
            raise NotLoose(f"image closures meet along gluing {k}")

    for cls in S.vertex_classes:
        near_all = True
        for u in unions:
            near = False
            for (p, v) in cls.corners:
                z = S.polygons[p][v]
                shape = u.get(p)
                if shape is not None and shape.distance(Point(z.real, z.imag)) <= infl:
                    near = True
                    break
            if not near:
                near_all = False
                break
        if near_all:
            raise NotLoose(f"image closures meet at vertex class {cls.corners[0]}")

    return 1.0 - 1.0 / n


def pigeonhole_witness(total, atoms, n=None, tol: float = 1e-9) -> int:
    """Index of a set with mass at most (1 - 1/n) of the total.

    `atoms` maps each intersection atom (an iterable of the set indices
    containing it; () is the part outside every set) to its mass.  The
    atom lying in all n sets must have mass zero, and the masses must add
    up to the total.
    """
    table = {}
    for key, mass in atoms.items():
        ids = frozenset((key,)) if isinstance(key, int) else frozenset(int(i) for i in key)
        table[ids] = table.get(ids, 0.0) + float(mass)
    indices = set().union(*table.keys()) if table else set()
    if n is None:
        if not indices:
            raise InputError("cannot infer the number of sets from an empty table")
        n = max(indices) + 1
    n = int(n)
    if n < 1 or any(i < 0 or i >= n for i in indices):
        raise InputError("atom table names sets outside 0..n-1")
    total = float(total)
    slack = tol * max(1.0, abs(total))
    if any(m < -slack for m in table.values()):
        raise InputError("atom masses must be nonnegative")
    if table.get(frozenset(range(n)), 0.0) > slack:
        raise InputError("the common-intersection atom must have mass zero")
    if abs(sum(table.values()) - total) > slack:
        raise InputError("atom masses do not add up to the total measure")
    mu = [
        sum(m for ids, m in table.items() if i in ids) for i in range(n)
    ]
    best = min(range(n), key=mu.__getitem__)
    if mu[best] > (1.0 - 1.0 / n) * total + slack:
        raise ValidationError("pigeonhole bound violated; table inconsistent")
    return best


@dataclass(frozen=True)
class ComposeReport:
    """Per-candidate check of submultiplicativity of stretch factors.

    `upper_inner`/`upper_outer` are candidate-restricted upper estimates
    (image EL upper over source EL lower, maximized over candidates), so
    lower_composite <= upper_inner * upper_outer must hold.
    """

    lower_composite: float
    upper_inner: float
    upper_outer: float
    consistent: bool


def sf_compose_check(
    f: SubsurfaceEmbedding, g: SubsurfaceEmbedding, candidates, level: int = 0
) -> ComposeReport:
    """Check lower(SF[g∘f]) <= est(SF[f])·est(SF[g]) on the candidates."""
    if f.codomain is not g.domain:
        raise InputError("embeddings do not compose: codomain/domain mismatch")
    compose_embeddings(g, f)  # validates the composite geometrically
    est_inner = est_outer = lower = 0.0
    for cand in candidates:
        c = curvelib.reduce(f.domain, cand)
        if not len(c):
            continue
        r_iv = el_interval(f.domain, c, level)
        mid = pushforward_reduce(f, c)
        if not len(mid):
            continue
        m_iv = el_interval(f.codomain, mid, level)
        top = pushforward_reduce(g, mid)
        if not len(top):
            continue
        s_iv = el_interval(g.codomain, top, level)
        if r_iv.lower > 0:
            est_inner = max(est_inner, m_iv.upper / r_iv.lower)
        if m_iv.lower > 0:
            est_outer = max(est_outer, s_iv.upper / m_iv.lower)
        if math.isfinite(r_iv.upper) and r_iv.upper > 0:
            lower = max(lower, s_iv.lower / r_iv.upper)
    if math.isinf(est_inner) or math.isinf(est_outer):
        consistent = True
    else:
        bound = est_inner * est_outer
        consistent = lower <= bound + 1e-9 * max(1.0, bound)
    return ComposeReport(
        lower_composite=lower,
        upper_inner=est_inner,
        upper_outer=est_outer,
        consistent=consistent,
    )


def _same_structure(x: FlatSurface, y: FlatSurface, what: str):
    if len(x.polygons) != len(y.polygons) or any(
        len(a) != len(b) or any(abs(u - v) > 1e-12 * max(1.0, x.scale) for u, v in zip(a, b))
        for a, b in zip(x.polygons, y.polygons)
    ):
        raise InputError(f"{what}: polygon data does not match the fiber product")
    gx = [(tuple(g.a), tuple(g.b), g.kind) for g in x.gluings]
    gy = [(tuple(g.a), tuple(g.b), g.kind) for g in y.gluings]
    if gx != gy:
        raise InputError(f"{what}: gluing data does not match the fiber product")
    if sorted(x.punctures) != sorted(y.punctures):
        raise InputError(f"{what}: puncture data does not match the fiber product")


@dataclass(frozen=True)
class CoverSFReport:
    """Stretch bounds for an embedding and for its lift over a cover."""

    degree: int
    base: StretchBound
    cover: StretchBound
    monotone: bool
    gap: float
    lifted: SubsurfaceEmbedding
    domain_spec: CoverSpec


def sf_cover_report(
    f: SubsurfaceEmbedding,
    spec: CoverSpec,
    candidates,
    level: int = 0,
    lifted: SubsurfaceEmbedding | None = None,
    lifted_candidates=(),
) -> CoverSFReport:
    """Certified SF lower bounds before and after passing to a cover.

    Candidates are pulled back through the induced cover of the domain;
    `lifted_candidates` adds curves native to the covered domain.  A
    caller may pass `lifted`, an embedding between richer surfaces
    (named curves, bound recipes) that must agree with the fiber product
    polygon-for-polygon; the bare constructed lift is used otherwise.
    """
    base_bound = sf_lower(f, candidates, level)
    ce = cover_embedding(f, spec)
    lift = ce.lifted
    if lifted is not None:
        _same_structure(lifted.domain, ce.lifted.domain, "lifted domain")
        _same_structure(lifted.codomain, ce.lifted.codomain, "lifted codomain")
        for up, built in zip(lifted.placements, ce.lifted.placements):
            if (
                up.host != built.host
                or up.matrix != built.matrix
                or abs(up.offset - built.offset) > 1e-12
            ):
                raise InputError("lifted placements do not match the fiber product")
        lift = lifted
    cover_cands = []
    for cand in candidates:
        c = curvelib.reduce(f.domain, cand)
        if len(c):
            cover_cands.append(pullback_curve(ce.domain_spec, c))
    cover_cands.extend(lifted_candidates)
    cover_bound = sf_lower(lift, cover_cands, level)
    tol = 1e-9 * max(1.0, base_bound.lower)
    return CoverSFReport(
        degree=spec.degree,
        base=base_bound,
        cover=cover_bound,
        monotone=cover_bound.lower >= base_bound.lower - tol,
        gap=cover_bound.lower - base_bound.lower,
        lifted=lift,
        domain_spec=ce.domain_spec,
    )


def branched_strip_lift(s: float, t: float):
    """Strip inclusion with its branched double cover, ready for
    sf_cover_report: returns (f, spec, lifted) where f includes the s by 1
    doubled strip into the t by 1 one, spec is the double cover of the
    codomain swapping sheets across the bottom seam, and lifted is the
    same inclusion upstairs between the richer stock doubles (which carry
    the curve C2 and its bound recipes)."""
    from .examples import branched_double, double_rectangle

    if not 0 < s < t:
        raise InputError("need 0 < s < t for a strict strip inclusion")
    f = SubsurfaceEmbedding(
        double_rectangle(s), double_rectangle(t), [Placement(0), Placement(1)]
    )
    spec = CoverSpec(f.codomain, 2, {0: (1, 0)})
    lifted = SubsurfaceEmbedding(
        branched_double(s), branched_double(t), [Placement(r) for r in range(4)]
    )
    return f, spec, lifted

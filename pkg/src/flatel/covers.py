"""Finite covers described by permutation monodromy over the gluings.

A degree-d cover carries d copies of every base polygon; copy s of the
a-side polygon of gluing k is glued to copy perm_k[s] of the b-side
polygon.  Crossing a gluing from the b side therefore applies the inverse
permutation.  Branched constructions are not expressible here: every
gluing lifts to d honest gluings, so the covering map is unbranched away
from nothing.  Cover polygon (p, s) gets index p*d + s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .curves import Component, MultiCurve, validate_curve
from .errors import InputError, ValidationError
from .extremal import ELInterval, el_interval
from .surface import FlatSurface, Gluing


def _as_permutation(perm, degree: int) -> tuple[int, ...]:
    p = tuple(int(x) for x in perm)
    if sorted(p) != list(range(degree)):
        raise InputError(f"{perm!r} is not a permutation of 0..{degree - 1}")
    return p


def _inverse(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for s, t in enumerate(perm):
        inv[t] = s
    return tuple(inv)


@dataclass(frozen=True)
class CoverSpec:
    """Base surface, degree, and one sheet permutation per gluing.

    `monodromy` may be given as a mapping from gluing index to a one-line
    permutation; unspecified gluings get the identity.  It is normalized
    to a full tuple, one entry per base gluing.
    """

    base: FlatSurface
    degree: int
    monodromy: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        d = int(self.degree)
        if d < 1:
            raise InputError(f"cover degree must be >= 1, got {self.degree}")
        object.__setattr__(self, "degree", d)
        ident = tuple(range(d))
        given = self.monodromy
        if not isinstance(given, dict):
            given = {k: perm for k, perm in enumerate(given)}
        table = []
        for k in range(len(self.base.gluings)):
            perm = given.get(k)
            table.append(ident if perm is None else _as_permutation(perm, d))
        for k in given:
            if not 0 <= int(k) < len(self.base.gluings):
                raise InputError(f"monodromy names unknown gluing {k}")
        object.__setattr__(self, "monodromy", tuple(table))

    def step(self, p: int, i: int, sheet: int) -> int:
        """Sheet reached by crossing edge (p, i) of the base from `sheet`."""
        k = self.base.gluing_index(p, i)
        if k is None:
            raise InputError(f"edge ({p}, {i}) is a boundary edge")
        g = self.base.gluings[k]
        if (p, i) == tuple(g.a):
            return self.monodromy[k][sheet]
        return _inverse(self.monodromy[k])[sheet]


def build_cover(spec: CoverSpec) -> FlatSurface:
    """Total space of the cover, validated.  Named curves and recipes do
    not transfer (their crossing words live on the base); periodic
    directions do."""
    base, d = spec.base, spec.degree
    polys = []
    for poly in base.polygons:
        polys.extend([poly] * d)
    gluings = []
    for k, g in enumerate(base.gluings):
        (pa, ia), (pb, ib) = tuple(g.a), tuple(g.b)
        perm = spec.monodromy[k]
        for s in range(d):
            gluings.append(Gluing((pa * d + s, ia), (pb * d + perm[s], ib), g.kind))
    bare = FlatSurface(polys, gluings, tol=base.tol)
    # A base puncture lifts to one mark per preimage vertex; several sheet
    # copies of the same corner can close up into a single vertex upstairs.
    marks = []
    seen = set()
    for (p, i) in base.punctures:
        for s in range(d):
            cls = bare.vertex_class_of(p * d + s, i)
            if cls.corners in seen:
                continue
            seen.add(cls.corners)
            marks.append(min(cls.corners))
    out = FlatSurface(
        polys,
        gluings,
        punctures=sorted(marks),
        tol=base.tol,
        periodic_directions=base.periodic_directions,
    )
    out.require_valid()
    return out


def cover_components(spec: CoverSpec) -> tuple[frozenset, ...]:
    """Connected components of the total space, as sets of cover polygon
    indices.  Connectivity is reported, never required."""
    base, d = spec.base, spec.degree
    n = len(base.polygons) * d
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, g in enumerate(base.gluings):
        (pa, _), (pb, _) = tuple(g.a), tuple(g.b)
        perm = spec.monodromy[k]
        for s in range(d):
            ra, rb = find(pa * d + s), find(pb * d + perm[s])
            if ra != rb:
                parent[ra] = rb
    groups = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return tuple(frozenset(v) for _, v in sorted(groups.items()))


def pullback_curve(spec: CoverSpec, curve: MultiCurve) -> MultiCurve:
    """Full preimage with the same weights.

    A loop lifts to one loop per orbit of its crossing-word monodromy,
    traversing the word once per orbit element; an arc lifts to one copy
    per sheet.  Total crossing count is degree times the base count.
    """
    base, d = spec.base, spec.degree
    validate_curve(base, curve)
    lifts = []
    total = 0
    for comp in curve:
        word = comp.crossings
        if comp.kind == "arc":
            for s0 in range(d):
                s = s0
                lifted = []
                for (p, i) in word:
                    lifted.append((p * d + s, i))
                    s = spec.step(p, i, s)
                lifts.append(
                    Component("arc", tuple(lifted), comp.weight, comp.params)
                )
                total += len(lifted)
            continue
        unvisited = set(range(d))
        while unvisited:
            s0 = min(unvisited)
            s = s0
            lifted = []
            wraps = 0
            while True:
                unvisited.discard(s)
                wraps += 1
                for (p, i) in word:
                    lifted.append((p * d + s, i))
                    s = spec.step(p, i, s)
                if s == s0:
                    break
            params = None if comp.params is None else comp.params * wraps
            lifts.append(Component("loop", tuple(lifted), comp.weight, params))
            total += len(lifted)
    want = d * sum(len(c.crossings) for c in curve)
    if total != want:
        raise ValidationError(
            f"pullback produced {total} crossings, expected {want}"
        )
    return MultiCurve(tuple(lifts))


@dataclass(frozen=True)
class CoverReport:
    """Verdict of the degree-scaling law on one curve.

    `exact` is None when either interval is too wide to test the equality
    form; `consistent` compares the scaled base interval with the cover
    interval for overlap.
    """

    degree: int
    components: int
    base_interval: ELInterval
    cover_interval: ELInterval
    consistent: bool
    exact: bool | None
    cover_surface: FlatSurface
    pullback: MultiCurve


def el_cover_check(spec: CoverSpec, curve: MultiCurve, level: int = 0) -> CoverReport:
    cover = build_cover(spec)
    lifted = pullback_curve(spec, curve)
    base_iv = el_interval(spec.base, curve, level)
    cover_iv = el_interval(cover, lifted, level)
    d = spec.degree

    lo = max(d * base_iv.lower, cover_iv.lower)
    hi = min(d * base_iv.upper, cover_iv.upper)
    slack = 1e-9 * max(1.0, lo if math.isfinite(lo) else 1.0)
    consistent = lo <= hi + slack

    exact = None
    if base_iv.gap <= 1e-9 * max(1.0, base_iv.lower) and cover_iv.gap <= 1e-9 * max(
        1.0, cover_iv.lower
    ):
        want = d * base_iv.midpoint
        exact = abs(cover_iv.midpoint - want) <= 1e-9 * max(1.0, abs(want))
    return CoverReport(
        degree=d,
        components=len(cover_components(spec)),
        base_interval=base_iv,
        cover_interval=cover_iv,
        consistent=consistent,
        exact=exact,
        cover_surface=cover,
        pullback=lifted,
    )


@dataclass(frozen=True)
class CoveredEmbedding:
    """Fiber product of an embedding with a cover of its codomain.

    `domain_spec` is the induced cover of the domain; `lifted` embeds its
    total space into the total space of `spec`.  Sheets are labeled so
    that the square commutes literally: domain copy (r, s) is placed into
    codomain copy (host(r), s) by the original map.
    """

    base: object
    spec: CoverSpec
    domain_spec: CoverSpec
    lifted: object

    def __post_init__(self):
        d = self.spec.degree
        f, lift = self.base, self.lifted
        for r, pl in enumerate(f.placements):
            for s in range(d):
                up = lift.placements[r * d + s]
                if (
                    up.host != pl.host * d + s
                    or up.matrix != pl.matrix
                    or up.offset != pl.offset
                ):
                    raise ValidationError(
                        f"lifted placement of polygon ({r}, {s}) does not commute"
                    )


def cover_embedding(f, spec: CoverSpec) -> CoveredEmbedding:
    """Pull an embedding back over a cover of its codomain.

    The induced monodromy over a domain gluing is the codomain permutation
    of the gluing carrying it (inverted when the a side of the domain
    gluing lands on the b side), and the identity over a seam interior to
    a host polygon.
    """
    from .stretch import SubsurfaceEmbedding

    if f.codomain is not spec.base:
        raise InputError("cover spec must cover the codomain of the embedding")
    d = spec.degree
    induced = {}
    for k in range(len(f.domain.gluings)):
        status = f.gluing_status(k)
        if status[0] == "interior":
            continue
        _, ks, aligned = status
        perm = spec.monodromy[ks]
        induced[k] = perm if aligned else _inverse(perm)
    domain_spec = CoverSpec(f.domain, d, induced)
    domain_cover = build_cover(domain_spec)
    cover = build_cover(spec)
    placements = []
    for r in range(len(f.domain.polygons)):
        pl = f.placements[r]
        for s in range(d):
            placements.append(replace(pl, host=pl.host * d + s))
    lifted = SubsurfaceEmbedding(domain_cover, cover, placements)
    return CoveredEmbedding(base=f, spec=spec, domain_spec=domain_spec, lifted=lifted)

"""Straight-line flow and cylinder decompositions.

For a direction d, every polygon is cut along the level function
level(z) = cross(d, z) at the levels of its vertices and of every traced
separatrix (flow line launched from a vertex).  Between consecutive levels
a polygon contributes a band; following the mid-band leaf across gluings
joins bands into cylinders.  Bands are tracked as oriented states
(band, travel sign) so folded cylinders that traverse a band twice in
opposite directions come out right.

Cylinders abutting across a leaf that carries no cone point, puncture or
boundary vertex are merged (the leaf is removable).  The merge scan is
conservative: it may refuse a merge when an unrelated singular vertex sits
at the same level, but it never joins across a genuinely singular leaf.

Raises NotPeriodic when some leaf hits the boundary transversally, and
Inconclusive when the step budget runs out or a polygon is too non-convex
for a band to be cut by single chords.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import Inconclusive, NotPeriodic

DEFAULT_BUDGET = 100_000


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


@dataclass
class RayStep:
    poly: int
    start: complex
    end: complex
    edge: int  # exit edge index
    param: float  # exit parameter on that edge


@dataclass
class RayStop:
    kind: str  # "vertex" | "boundary" | "budget"
    poly: int = -1
    edge: int = -1
    param: float = 0.0
    point: complex = 0j


def _exit_edge(surface, p, z, d):
    """First transversal edge hit by the ray z + s*d, s > 0, in polygon p.

    Returns (s, edge, u) with u the hit parameter on the edge, or None when
    no edge lies ahead.
    """
    verts = surface.polygons[p]
    n = len(verts)
    eps_s = 1e-12 * surface.scale
    best = None
    for i in range(n):
        a = verts[i]
        v = verts[(i + 1) % n] - a
        denom = _cross(d, v)
        if abs(denom) < 1e-14 * abs(v):
            continue
        s = _cross(a - z, v) / denom
        u = _cross(a - z, d) / denom
        if s <= eps_s:
            continue
        if u < -1e-9 or u > 1 + 1e-9:
            continue
        if best is None or s < best[0]:
            best = (s, i, u)
    return best


def trace_ray(surface, p, z, d, budget=DEFAULT_BUDGET):
    """Flow from z in polygon p along d until a vertex or a boundary edge is
    hit or the budget runs out.  Returns (steps, stop)."""
    steps = []
    for _ in range(budget):
        hit = _exit_edge(surface, p, z, d)
        if hit is None:
            return steps, RayStop("vertex", poly=p, point=z)
        s, i, u = hit
        z_exit = z + s * d
        a, b = surface.edge_vertices(p, i)
        elen = abs(b - a)
        steps.append(RayStep(p, z, z_exit, i, u))
        if min(u, 1 - u) * elen < 1e-8 * surface.scale:
            return steps, RayStop("vertex", poly=p, edge=i, param=u, point=z_exit)
        if surface.is_boundary_edge(p, i):
            return steps, RayStop("boundary", poly=p, edge=i, param=u, point=z_exit)
        p, z, d = surface.cross_edge(p, i, z_exit, d)
    return steps, RayStop("budget")


def trace_closed_leaf(surface, p, z, d, budget=DEFAULT_BUDGET):
    """Follow the leaf through z until it returns to its first crossing.

    Returns (crossings, params, length) with crossings as (poly, edge) in
    traversal order.  Raises NotPeriodic on a vertex or boundary hit,
    Inconclusive when the budget runs out.
    """
    crossings = []
    params = []
    length = 0.0
    first = None
    for _ in range(budget):
        hit = _exit_edge(surface, p, z, d)
        if hit is None:
            raise NotPeriodic("leaf ran into a vertex")
        s, i, u = hit
        z_exit = z + s * d
        a, b = surface.edge_vertices(p, i)
        elen = abs(b - a)
        if min(u, 1 - u) * elen < 1e-8 * surface.scale:
            raise NotPeriodic("leaf passes through a vertex")
        if surface.is_boundary_edge(p, i):
            raise NotPeriodic("leaf hits the boundary")
        length += s * abs(d)
        q, z2, d2 = surface.cross_edge(p, i, z_exit, d)
        d2u = d2 / abs(d2)
        if first is None:
            first = (p, i, u, d2u)
            crossings.append((p, i))
            params.append(u)
        else:
            fp, fi, fu, fd = first
            if p == fp and i == fi and abs(u - fu) * elen < 1e-7 * surface.scale and abs(d2u - fd) < 1e-7:
                return crossings, params, length
            crossings.append((p, i))
            params.append(u)
        p, z, d = q, z2, d2
    raise Inconclusive("leaf did not close within the step budget")


@dataclass
class Band:
    poly: int
    lo: float
    hi: float
    entry: tuple[int, complex] = (0, 0j)  # (edge, point) of the mid chord
    exit: tuple[int, complex] = (0, 0j)
    chord: float = 0.0

    @property
    def width(self):
        return self.hi - self.lo


@dataclass
class Cylinder:
    direction: complex
    circumference: float
    height: float
    bands: tuple[int, ...]  # indices into CylinderDecomposition.bands
    wraps: bool = False

    @property
    def modulus(self):
        return self.height / self.circumference

    @property
    def extremal_length(self):
        return self.circumference / self.height


@dataclass
class CylinderDecomposition:
    direction: complex
    bands: list[Band]
    cylinders: list[Cylinder]
    band_cylinder: dict[int, int] = field(default_factory=dict)

    def locate(self, poly: int, level: float, tol: float = 0.0):
        """Band holding this level strictly inside, or None."""
        for bi, b in enumerate(self.bands):
            if b.poly == poly and b.lo + tol < level < b.hi - tol:
                return bi
        return None

    def total_area(self):
        return sum(c.circumference * c.height for c in self.cylinders)


def _vertex_is_relevant(surface, vc, angle_tol=1e-7):
    """True when straight flow cannot pass through this vertex class."""
    if vc.boundary or vc.puncture:
        return True
    return abs(vc.angle - 2 * math.pi) > angle_tol


def _band_chord(surface, band, d):
    """Fill in the chord of the band's mid leaf inside its polygon."""
    p = band.poly
    mid = 0.5 * (band.lo + band.hi)
    z0 = mid * (1j * d)  # cross(d, z0) == mid
    verts = surface.polygons[p]
    n = len(verts)
    hits = []
    for i in range(n):
        a = verts[i]
        v = verts[(i + 1) % n] - a
        denom = _cross(d, v)
        if abs(denom) < 1e-14 * abs(v):
            continue
        s = _cross(a - z0, v) / denom
        u = _cross(a - z0, d) / denom
        if -1e-9 <= u <= 1 + 1e-9:
            hits.append((s, i, u))
    hits.sort()
    if len(hits) != 2:
        raise Inconclusive(
            f"band chord in polygon {p} is not a single segment ({len(hits)} hits)"
        )
    (s0, i0, u0), (s1, i1, u1) = hits
    if min(u0, 1 - u0, u1, 1 - u1) < 1e-7:
        raise Inconclusive(f"band chord in polygon {p} grazes a vertex")
    band.entry = (i0, z0 + s0 * d)
    band.exit = (i1, z0 + s1 * d)
    band.chord = s1 - s0


def cylinder_decomposition(surface, direction, budget=DEFAULT_BUDGET):
    d = complex(direction[0], direction[1]) if isinstance(direction, (tuple, list)) else complex(direction)
    if abs(d) == 0:
        raise ValueError("direction must be nonzero")
    d = d / abs(d)
    scale = surface.scale
    lvl_tol = 1e-8 * scale

    def level(z):
        return _cross(d, z)

    # 1. Cut levels: vertex levels plus the levels swept by separatrices.
    levels = {p: set() for p in range(len(surface.polygons))}
    for p, verts in enumerate(surface.polygons):
        for z in verts:
            levels[p].add(level(z))

    remaining = budget
    for p, verts in enumerate(surface.polygons):
        n = len(verts)
        for i in range(n):
            corner = verts[i]
            w = verts[(i + 1) % n] - corner
            interior = surface.corner_angle(p, i)
            for e in (d, -d):
                ang = cmath.phase(e / w) % (2 * math.pi)
                if ang < 1e-9 or ang > interior - 1e-9:
                    continue  # along an edge or outside the corner sector
                steps, stop = trace_ray(surface, p, corner, e, budget=remaining)
                remaining -= len(steps) + 1
                for st in steps:
                    levels[st.poly].add(level(st.start))
                if stop.kind == "budget" or remaining <= 0:
                    raise Inconclusive("separatrix step budget exhausted")
                if stop.kind == "boundary":
                    a, b = surface.edge_vertices(stop.poly, stop.edge)
                    if abs(_cross(d, (b - a) / abs(b - a))) > 1e-9:
                        raise NotPeriodic("separatrix hits the boundary transversally")
                # A vertex stop is fine: the continuation past the vertex is
                # covered by the separatrices launched from that vertex.

    # 2. Bands between consecutive levels.
    bands = []
    for p in range(len(surface.polygons)):
        ordered = sorted(levels[p])
        merged = [ordered[0]]
        for x in ordered[1:]:
            if x - merged[-1] > lvl_tol:
                merged.append(x)
        for lo, hi in zip(merged, merged[1:]):
            b = Band(p, lo, hi)
            _band_chord(surface, b, d)
            bands.append(b)

    deco = CylinderDecomposition(d, bands, [], {})

    # 3. Orbits of the oriented-band successor map.
    def successor(bi, sgn):
        b = bands[bi]
        edge, z = (b.exit if sgn > 0 else b.entry)
        dd = d if sgn > 0 else -d
        if surface.is_boundary_edge(b.poly, edge):
            raise NotPeriodic("leaf hits the boundary transversally")
        q, z2, d2 = surface.cross_edge(b.poly, edge, z, dd)
        nbi = deco.locate(q, level(z2), lvl_tol * 0.5)
        if nbi is None:
            raise Inconclusive("leaf lands on a cut level between bands")
        nb = bands[nbi]
        if abs(level(z2) - 0.5 * (nb.lo + nb.hi)) > 0.26 * nb.width:
            raise Inconclusive("band widths are inconsistent along a leaf")
        nsgn = 1 if abs(d2 - d) < 1e-9 else -1
        return nbi, nsgn

    visited = set()
    cylinders = []
    band_cyl = {}
    for bi in range(len(bands)):
        for sgn in (1, -1):
            if (bi, sgn) in visited:
                continue
            orbit = []
            state = (bi, sgn)
            while state not in visited:
                visited.add(state)
                orbit.append(state)
                state = successor(*state)
            if state != orbit[0]:
                raise Inconclusive("leaf orbit does not close on its start")
            for obi, osgn in orbit:
                visited.add((obi, -osgn))  # reversed orbit: same cylinder
            widths = [bands[obi].width for obi, _ in orbit]
            if max(widths) - min(widths) > 10 * lvl_tol:
                raise Inconclusive("bands of one cylinder have unequal widths")
            ci = len(cylinders)
            cylinders.append(
                Cylinder(
                    direction=d,
                    circumference=sum(bands[obi].chord for obi, _ in orbit),
                    height=widths[0],
                    bands=tuple(sorted({obi for obi, _ in orbit})),
                )
            )
            for obi, _ in orbit:
                band_cyl[obi] = ci

    deco.cylinders = cylinders
    deco.band_cylinder = band_cyl
    _merge_regular_leaves(surface, deco, lvl_tol)
    return deco


def _probe_neighbor(surface, deco, bi, side, lvl_tol):
    """Band just beyond this band's hi (side=+1) or lo (side=-1) level.

    Returns a band index or None at the surface boundary (or when the scan
    gives up, which only suppresses an optional merge)."""
    d = deco.direction
    band = deco.bands[bi]
    p = band.poly
    c = band.hi if side > 0 else band.lo
    delta = 0.25 * min(b.width for b in deco.bands)

    direct = deco.locate(p, c + side * delta, 0.0)
    if direct is not None and direct != bi:
        return direct
    if direct == bi:
        return None
    # c is an extreme level of p: continue across an edge parallel to d
    # sitting at that level.
    verts = surface.polygons[p]
    n = len(verts)
    for i in range(n):
        a = verts[i]
        b2 = verts[(i + 1) % n]
        v = b2 - a
        if abs(_cross(d, v / abs(v))) > 1e-9:
            continue
        if abs(_cross(d, a) - c) > lvl_tol:
            continue
        if surface.is_boundary_edge(p, i):
            return None
        zmid = 0.5 * (a + b2)
        qp, qi = surface.partner(p, i)
        z2 = surface.cross_edge(p, i, zmid, d)[1]
        aq, bq = surface.edge_vertices(qp, qi)
        nrm = 1j * (bq - aq) / abs(bq - aq)  # inward normal of partner edge
        return deco.locate(qp, _cross(d, z2 + delta * nrm), 0.0)
    return None


def _leaf_is_regular(surface, deco, cyl_ids, shared_level_points, lvl_tol):
    """Conservative regularity test for a shared boundary leaf: no
    singular-relevant vertex may sit at a shared level in any polygon
    touched by the cylinders involved."""
    polys = set()
    for c in cyl_ids:
        for bi in deco.cylinders[c].bands:
            polys.add(deco.bands[bi].poly)
    d = deco.direction
    for p in polys:
        for i, z in enumerate(surface.polygons[p]):
            lev = _cross(d, z)
            if any(abs(lev - s) <= 10 * lvl_tol for s in shared_level_points):
                vc = surface.vertex_class_of(p, i)
                if _vertex_is_relevant(surface, vc):
                    return False
    return True


def _merge_regular_leaves(surface, deco, lvl_tol):
    """Join cylinders abutting across regular leaves; detect wraps.

    Every interior leaf produces exactly two probe records (one from each
    side).  Within a merge group, (records / 2) regular leaves joining V
    cylinders into a tree needs V - 1 of them; any surplus closes the merged
    cylinder onto itself, which is a wrap.
    """
    n = len(deco.cylinders)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    records = []  # (ci, cj, level)
    for bi, b in enumerate(deco.bands):
        ci = deco.band_cylinder[bi]
        for side in (1, -1):
            nb = _probe_neighbor(surface, deco, bi, side, lvl_tol)
            if nb is None:
                continue
            cj = deco.band_cylinder[nb]
            lev = b.hi if side > 0 else b.lo
            if _leaf_is_regular(surface, deco, (ci, cj), [lev], lvl_tol):
                records.append((ci, cj, lev))

    for ci, cj, _ in records:
        ri, rj = find(ci), find(cj)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    groups = {}
    for ci in range(n):
        groups.setdefault(find(ci), []).append(ci)

    new_cyls = []
    remap = {}
    for root in sorted(groups):
        members = groups[root]
        circs = [deco.cylinders[m].circumference for m in members]
        if max(circs) - min(circs) > 1e-6 * surface.scale:
            raise Inconclusive("merged cylinders disagree on circumference")
        height = sum(deco.cylinders[m].height for m in members)
        bands = tuple(sorted(b for m in members for b in deco.cylinders[m].bands))
        rec_count = sum(1 for ci, cj, _ in records if find(ci) == root)
        wraps = rec_count > 2 * (len(members) - 1)
        idx = len(new_cyls)
        new_cyls.append(Cylinder(deco.direction, circs[0], height, bands, wraps))
        for m in members:
            remap[m] = idx

    deco.cylinders = new_cyls
    deco.band_cylinder = {bi: remap[c] for bi, c in deco.band_cylinder.items()}


@dataclass
class StripResult:
    width: float
    note: str | None = None


def maximal_embedded_strip(surface, rep):
    """Width of the widest embedded straight strip around a closed geodesic.

    Degenerate representatives (through a cone point, puncture or boundary
    vertex) get width zero with a diagnostic note.
    """
    if rep.kind != "loop":
        raise ValueError("strips are defined for closed geodesics only")
    if rep.degenerate:
        return StripResult(0.0, "geodesic passes through a vertex")
    d = rep.straight_direction(surface)
    if d is None:
        return StripResult(0.0, "representative is not a single straight leaf")
    deco = cylinder_decomposition(surface, d)
    lvl_tol = 1e-8 * surface.scale
    p0, z0, _ = rep.segments[0]
    lev = _cross(deco.direction, z0)
    bi = deco.locate(p0, lev, 0.0)
    if bi is None:
        return StripResult(0.0, "geodesic runs along a cut leaf")
    ci = deco.band_cylinder[bi]
    cyl = deco.cylinders[ci]
    if cyl.wraps:
        return StripResult(cyl.height, None)

    def march(start, side):
        dist = 0.0
        seen = set()
        cur = start
        lv = lev
        while True:
            b = deco.bands[cur]
            dist += (b.hi - lv) if side > 0 else (lv - b.lo)
            if dist >= cyl.height:
                return cyl.height
            bound = b.hi if side > 0 else b.lo
            if not _leaf_is_regular(surface, deco, (ci,), [bound], lvl_tol):
                return dist
            nb = _probe_neighbor(surface, deco, cur, side, lvl_tol)
            if nb is None or deco.band_cylinder[nb] != ci or nb in seen:
                return dist
            seen.add(cur)
            cur = nb
            b2 = deco.bands[cur]
            lv = b2.lo if side > 0 else b2.hi

    d_up = march(bi, 1)
    d_dn = march(bi, -1)
    # Asymmetric growth: when the cylinder does not wrap transversally the
    # two marches sweep disjoint leaf sets, so their sum is still embedded.
    return StripResult(min(cyl.height, d_up + d_dn), None)

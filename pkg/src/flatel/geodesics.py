"""Curve shortening on flat surfaces.

A curve is combinatorial: a cyclic (loop) or linear (arc) sequence of edge
crossings.  Its geometric representative is a chain of straight chords, one
per polygon visited, parametrized by the crossing positions t in [0, 1] on
each crossed edge.  Total length is convex in t, so exact coordinate descent
finds the shortest representative in the crossing class.  Limits that fold
onto vertex chains are reached exactly (parameters clamp to 0 or 1) and are
reported with the `degenerate` flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import TrivialCurve, ValidationError

_PIN_TOL = 1e-7  # parameter distance to an edge endpoint that counts as pinned


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


def _dot(a: complex, b: complex) -> float:
    return a.real * b.real + a.imag * b.imag


@dataclass
class GeodesicRep:
    """Shortest representative of a crossing class.

    segments holds (polygon, start, end) per chord; length is the total.
    """

    kind: str
    crossings: tuple[tuple[int, int], ...]
    params: tuple[float, ...]
    segments: tuple[tuple[int, complex, complex], ...]
    length: float
    degenerate: bool

    def straight_direction(self, surface, tol: float = 1e-9):
        """Common direction of all chords if the representative is a single
        straight geodesic, else None.  Degenerate chords disqualify it."""
        dirs = []
        for _, z0, z1 in self.segments:
            v = z1 - z0
            if abs(v) < tol * 10 * surface.scale:
                return None
            dirs.append(v / abs(v))
        d0 = dirs[0]
        for d in dirs[1:]:
            if min(abs(d - d0), abs(d + d0)) > 1e-7:
                return None
        return d0


def check_crossings(surface, crossings, kind: str):
    """Fail fast when a crossing sequence is not transit-consistent."""
    if kind not in ("loop", "arc"):
        raise ValidationError(f"unknown component kind {kind!r}")
    if kind == "loop":
        if not crossings:
            raise ValidationError("loop with no crossings")
        for j, (p, i) in enumerate(crossings):
            if surface.is_boundary_edge(p, i):
                raise ValidationError(f"loop crosses boundary edge {(p, i)}")
            q, _ = surface.partner(p, i)
            p_next = crossings[(j + 1) % len(crossings)][0]
            if p_next != q:
                raise ValidationError(
                    f"crossing {j + 1} lies in polygon {p_next}, expected {q}"
                )
    else:
        if len(crossings) < 2:
            raise ValidationError("arc needs at least its two endpoints")
        for end in (crossings[0], crossings[-1]):
            if not surface.is_boundary_edge(*end):
                raise ValidationError(f"arc endpoint {end} is not on the boundary")
        if crossings[1][0] != crossings[0][0]:
            raise ValidationError("first arc segment must start in its own polygon")
        for j in range(1, len(crossings) - 1):
            p, i = crossings[j]
            if surface.is_boundary_edge(p, i):
                raise ValidationError(f"arc interior crosses boundary edge {(p, i)}")
            q, _ = surface.partner(p, i)
            if crossings[j + 1][0] != q:
                raise ValidationError(
                    f"crossing {j + 1} lies in polygon {crossings[j + 1][0]}, expected {q}"
                )


class _Chain:
    """Affine data for the chord-length objective of one component."""

    def __init__(self, surface, crossings, kind):
        check_crossings(surface, crossings, kind)
        self.surface = surface
        self.kind = kind
        self.crossings = tuple(tuple(c) for c in crossings)
        k = len(self.crossings)
        self.k = k
        self.A = []
        self.V = []
        for p, i in self.crossings:
            a, b = surface.edge_vertices(p, i)
            self.A.append(a)
            self.V.append(b - a)
        # Transition across crossing j, mapping its chart to the next one.
        self.sign = []
        self.c = []
        last = k - 1 if kind == "loop" else k - 1  # arcs never use index k-1
        for j in range(k):
            if kind == "arc" and (j == 0 or j == k - 1):
                self.sign.append(1)
                self.c.append(0j)
                continue
            s, c = surface.transition(*self.crossings[j])
            self.sign.append(s)
            self.c.append(c)

    def terms(self):
        """Segment index pairs (j_prev, j) contributing |exit_j - entry_j|."""
        if self.kind == "loop":
            return [((j - 1) % self.k, j) for j in range(self.k)]
        return [(j - 1, j) for j in range(1, self.k)]

    def entry_affine(self, jp):
        """Entry point of the segment after crossing jp, as (base, coeff) in
        the segment's chart: point = base + t_jp * coeff."""
        if self.kind == "arc" and jp == 0:
            return self.A[0], self.V[0]
        s, c = self.sign[jp], self.c[jp]
        return s * self.A[jp] + c, s * self.V[jp]

    def length(self, t):
        total = 0.0
        for jp, j in self.terms():
            e0, ev = self.entry_affine(jp)
            total += abs(self.A[j] + t[j] * self.V[j] - e0 - t[jp] * ev)
        return total

    def segments(self, t):
        out = []
        for jp, j in self.terms():
            e0, ev = self.entry_affine(jp)
            z0 = e0 + t[jp] * ev
            z1 = self.A[j] + t[j] * self.V[j]
            out.append((self.crossings[j][0], z0, z1))
        return out


def _min_norm_affine(alpha: complex, beta: complex) -> float:
    """Argmin over s in [0,1] of |alpha + s*beta|."""
    bb = _dot(beta, beta)
    if bb < 1e-300:
        return 0.5
    return min(1.0, max(0.0, -_dot(alpha, beta) / bb))


def _min_point(A: complex, V: complex, target: complex) -> float:
    """Argmin over s in [0,1] of |A + s*V - target|."""
    return _min_norm_affine(A - target, V)


def _min_two_point(A: complex, V: complex, a: complex, b: complex) -> float:
    """Argmin over s in [0,1] of |A+sV-a| + |A+sV-b| (convex, exact)."""
    cr_a = _cross(V, a - A)
    cr_b = _cross(V, b - A)
    if abs(cr_a) < 1e-14 and abs(cr_b) < 1e-14:
        # Both targets on the line: optimum anywhere between their feet.
        vv = _dot(V, V)
        if vv < 1e-300:
            return 0.5
        sa = _dot(a - A, V) / vv
        sb = _dot(b - A, V) / vv
        lo, hi = min(sa, sb), max(sa, sb)
        return min(1.0, max(0.0, min(hi, max(lo, 0.5 * (lo + hi)))))
    if cr_a * cr_b > 0:
        # Same side: reflect a across the line.
        vv = _dot(V, V)
        foot = A + (_dot(a - A, V) / vv) * V
        a = 2 * foot - a
        cr_a = -cr_a
    denom = _cross(V, b - a)
    if abs(denom) < 1e-300:
        return _min_point(A, V, a)
    u = -cr_a / denom
    x = a + u * (b - a)
    vv = _dot(V, V)
    return min(1.0, max(0.0, _dot(x - A, V) / vv))


def tighten(surface, crossings, kind: str = "loop", params=None, max_sweeps: int = 2000):
    """Shortest chord chain in the crossing class.

    Raises TrivialCurve when the class contracts to a point or a puncture
    (the infimum length is zero).
    """
    chain = _Chain(surface, crossings, kind)
    k = chain.k
    if params is None:
        t = [0.5] * k
    else:
        if len(params) != k:
            raise ValidationError("params length does not match crossings")
        t = [min(1.0, max(0.0, float(x))) for x in params]

    prev = chain.length(t)
    if k == 1:
        # Single-crossing loop: entry and exit share the parameter.
        e0, ev = chain.entry_affine(0)
        t[0] = _min_norm_affine(chain.A[0] - e0, chain.V[0] - ev)
        prev = chain.length(t)
    else:
        terms = chain.terms()
        # For each variable: the term it exits and the term it enters.
        exit_term = {j: (jp, j) for jp, j in terms}
        entry_term = {jp: (jp, j) for jp, j in terms}
        for _ in range(max_sweeps):
            for j in range(k):
                moved = False
                has_exit = j in exit_term
                has_entry = j in entry_term
                if has_exit and has_entry:
                    jp = exit_term[j][0]
                    e0, ev = chain.entry_affine(jp)
                    a = e0 + t[jp] * ev
                    jn = entry_term[j][1]
                    bpt = chain.A[jn] + t[jn] * chain.V[jn]
                    s, c = chain.sign[j], chain.c[j]
                    b = s * (bpt - c)
                    t[j] = _min_two_point(chain.A[j], chain.V[j], a, b)
                elif has_exit:
                    jp = exit_term[j][0]
                    e0, ev = chain.entry_affine(jp)
                    t[j] = _min_point(chain.A[j], chain.V[j], e0 + t[jp] * ev)
                elif has_entry:
                    jn = entry_term[j][1]
                    target = chain.A[jn] + t[jn] * chain.V[jn]
                    # Entry chart equals this edge's own chart at the arc start.
                    t[j] = _min_point(chain.A[j], chain.V[j], target)
            cur = chain.length(t)
            if prev - cur < 1e-14 * max(1.0, prev):
                prev = cur
                break
            prev = cur

    length = prev
    if kind == "loop" and length < 1e-6 * surface.scale:
        raise TrivialCurve(
            f"crossing class {crossings} contracts to a point or puncture"
        )
    pinned = any(x < _PIN_TOL or x > 1.0 - _PIN_TOL for x in t)
    segs = chain.segments(t)
    tiny = any(abs(z1 - z0) < 1e-9 * surface.scale for _, z0, z1 in segs)
    return GeodesicRep(
        kind=kind,
        crossings=chain.crossings,
        params=tuple(t),
        segments=tuple(segs),
        length=length,
        degenerate=pinned or tiny,
    )

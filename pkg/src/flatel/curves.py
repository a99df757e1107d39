"""Weighted multicurves given by edge-crossing sequences.

A component is a cyclic (loop) or endpoint-to-endpoint (arc) list of edge
crossings with a positive weight.  Reduction removes immediate backtracks
(enter and leave a polygon through the same gluing), drops components that
contract to points or punctures, and merges parallel components by adding
weights.  Intersection numbers are counted on shortest representatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from . import geodesics
from .errors import Inconclusive, InputError, TrivialCurve, ValidationError


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


@dataclass(frozen=True)
class Component:
    kind: str  # "loop" | "arc"
    crossings: tuple[tuple[int, int], ...]
    weight: float = 1.0
    params: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "crossings", tuple((int(p), int(i)) for p, i in self.crossings)
        )
        if self.params is not None:
            object.__setattr__(self, "params", tuple(float(t) for t in self.params))
        if self.weight <= 0:
            raise InputError(f"component weight must be positive, got {self.weight}")


@dataclass(frozen=True)
class MultiCurve:
    components: tuple[Component, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    @property
    def total_weight(self):
        return sum(c.weight for c in self.components)


def loop(crossings, weight=1.0, params=None) -> MultiCurve:
    return MultiCurve((Component("loop", tuple(crossings), weight, params),))


def validate_curve(surface, curve: MultiCurve):
    for comp in curve:
        geodesics.check_crossings(surface, comp.crossings, comp.kind)
        if comp.params is not None and len(comp.params) != len(comp.crossings):
            raise ValidationError("params length does not match crossings")


def scale(curve: MultiCurve, k) -> MultiCurve:
    k = float(k)
    if k <= 0:
        raise InputError(f"scale factor must be positive, got {k}")
    return MultiCurve(tuple(replace(c, weight=c.weight * k) for c in curve))


def backtrack_reduce(surface, crossings, kind):
    """Remove adjacent partner pairs until none remain.

    Crossing x followed by partner(x) means the path enters a polygon and
    immediately leaves through the same gluing; inside one polygon that is
    null-homotopic, so the pair cancels.  May return an empty tuple.
    """
    seq = list(crossings)
    changed = True
    while changed and len(seq) >= 2:
        changed = False
        n = len(seq)
        rng = range(n) if kind == "loop" else range(1, n - 2)
        for j in rng:
            jn = (j + 1) % n
            if kind == "arc" and jn == 0:
                continue
            p, i = seq[j]
            if surface.is_boundary_edge(p, i):
                continue
            if surface.partner(p, i) == tuple(seq[jn]):
                if jn > j:
                    del seq[jn]
                    del seq[j]
                else:
                    del seq[j]
                    del seq[jn]
                changed = True
                break
    return tuple(seq)


def _reversed_crossings(surface, crossings, kind):
    if kind == "loop":
        return tuple(surface.partner(p, i) for p, i in reversed(crossings))
    inner = tuple(surface.partner(p, i) for p, i in reversed(crossings[1:-1]))
    return (crossings[-1],) + inner + (crossings[0],)


def canonical_class(surface, crossings, kind):
    """Representative of the crossing class shared by parallel components:
    lexicographically least rotation over both traversal directions."""
    if kind == "arc":
        return min(tuple(crossings), _reversed_crossings(surface, crossings, kind))
    best = None
    for seq in (tuple(crossings), _reversed_crossings(surface, crossings, kind)):
        for r in range(len(seq)):
            rot = seq[r:] + seq[:r]
            if best is None or rot < best:
                best = rot
    return best


def reduce(surface, curve: MultiCurve) -> MultiCurve:
    """Backtrack-free, tightened, parallel-merged form.

    Components whose class contracts to a point or a puncture are dropped;
    the result can be empty.
    """
    validate_curve(surface, curve)
    kept = []
    for comp in curve:
        seq = backtrack_reduce(surface, comp.crossings, comp.kind)
        if comp.kind == "loop" and not seq:
            continue
        params = comp.params if seq == comp.crossings else None
        try:
            rep = geodesics.tighten(surface, seq, comp.kind, params)
        except TrivialCurve:
            continue
        kept.append(Component(comp.kind, seq, comp.weight, rep.params))

    merged: dict[tuple, Component] = {}
    order = []
    for comp in kept:
        key = (comp.kind, canonical_class(surface, comp.crossings, comp.kind))
        if key in merged:
            prev = merged[key]
            merged[key] = replace(prev, weight=prev.weight + comp.weight)
        else:
            merged[key] = comp
            order.append(key)
    return MultiCurve(tuple(merged[k] for k in order))


def curve_length(surface, curve: MultiCurve) -> float:
    """Weighted flat length of the shortest representatives."""
    total = 0.0
    for comp in curve:
        rep = geodesics.tighten(surface, comp.crossings, comp.kind, comp.params)
        total += comp.weight * rep.length
    return total


def _realize(surface, comp):
    rep = geodesics.tighten(surface, comp.crossings, comp.kind, comp.params)
    return [s for s in rep.segments if abs(s[2] - s[1]) > 1e-12 * surface.scale]


def _segment_crossings(surface, segs_c, segs_d, signed=False):
    """Transversal crossings between two polyline families.

    Raises Inconclusive on near-tangential or near-endpoint hits, which a
    different representative could count differently.
    """
    eps = 1e-9
    total = 0
    for p, a0, a1 in segs_c:
        u = a1 - a0
        for q, b0, b1 in segs_d:
            if p != q:
                continue
            v = b1 - b0
            den = _cross(u, v)
            base = abs(u) * abs(v)
            w = b0 - a0
            if abs(den) < 1e-11 * base:
                # parallel: overlap would be tangential
                if abs(_cross(u, w)) < 1e-9 * abs(u) * surface.scale:
                    d0 = (w / u).real if u != 0 else 0.0
                    d1 = ((b1 - a0) / u).real if u != 0 else 0.0
                    if min(d0, d1) < 1 - eps and max(d0, d1) > eps:
                        raise Inconclusive("overlapping parallel segments")
                continue
            s = _cross(w, v) / den
            t = _cross(w, u) / den
            inside = eps < s < 1 - eps and eps < t < 1 - eps
            near = -eps <= s <= 1 + eps and -eps <= t <= 1 + eps
            if inside:
                total += int(math.copysign(1, den)) if signed else 1
            elif near:
                raise Inconclusive("crossing too close to a segment endpoint")
    return total


def intersection_number(surface, c: MultiCurve, d: MultiCurve) -> float:
    """Weighted transversal crossing count of shortest representatives."""
    validate_curve(surface, c)
    validate_curve(surface, d)
    total = 0.0
    reps_d = [(comp.weight, _realize(surface, comp)) for comp in d]
    for comp_c in c:
        segs_c = _realize(surface, comp_c)
        for w_d, segs_d in reps_d:
            total += comp_c.weight * w_d * _segment_crossings(surface, segs_c, segs_d)
    return total


def signed_crossings(surface, c: MultiCurve, d: MultiCurve) -> float:
    """Algebraic (signed) crossing count, orientation as given."""
    total = 0.0
    reps_d = [(comp.weight, _realize(surface, comp)) for comp in d]
    for comp_c in c:
        segs_c = _realize(surface, comp_c)
        for w_d, segs_d in reps_d:
            total += comp_c.weight * w_d * _segment_crossings(
                surface, segs_c, segs_d, signed=True
            )
    return total


def slope_curve(surface, p: int, q: int) -> MultiCurve:
    """Closed leaf of direction (q, p) started on the offset line
    p*x - q*y = 1/2, which misses every vertex and boundary edge on the
    surfaces this is meant for.  Returns a weight-1 loop with parameters."""
    from . import cylinders as _cyl

    p, q = int(p), int(q)
    if p < 0 or q < 0 or (p == 0 and q == 0):
        raise InputError("slope needs nonnegative p, q, not both zero")
    if math.gcd(p, q) != 1:
        raise InputError(f"slope ({p}, {q}) is not in lowest terms")
    d = complex(q, p)
    d /= abs(d)

    candidates = []
    if p == 0:
        candidates.append(0.5 + 0.5j)
    else:
        for k in range(200):
            y0 = 0.05 + 0.9 * ((k * 0.6180339887498949) % 1.0)
            x0 = (0.5 + q * y0) / p
            candidates.append(complex(x0, y0))
    for z0 in candidates:
        for poly in range(len(surface.polygons)):
            if surface.contains_point(poly, z0, margin=1e-6 * surface.scale):
                crossings, params, _ = _cyl.trace_closed_leaf(surface, poly, z0, d)
                return MultiCurve(
                    (Component("loop", tuple(crossings), 1.0, tuple(params)),)
                )
    raise Inconclusive(f"no starting point found for slope ({p}, {q})")


_HOLE_ARCS = ("gamma_ab", "gamma_cd", "gamma_ac", "gamma_bd")


def _winding_vector(surface, curve: MultiCurve):
    """Winding numbers (n_a, n_b, n_c, n_d) of a closed curve around the four
    holes, from signed crossings with the hole-to-hole arcs.  The arcs are
    oriented first-to-second hole, so an arc from x to y picks up -n_x + n_y.
    """
    for name in _HOLE_ARCS:
        if name not in surface.named_curves:
            raise InputError("surface does not carry the four hole-to-hole arcs")
    counts = {}
    for name in _HOLE_ARCS:
        s = signed_crossings(surface, curve, surface.named_curves[name])
        if abs(s - round(s)) > 1e-6:
            raise Inconclusive(f"signed count with {name} is not integral: {s}")
        counts[name] = round(s)
    # Windings are defined up to a common shift; anchor n_a = 0.
    # An arc from hole x to hole y picks up n_y - n_x.
    n = (0, counts["gamma_ab"], counts["gamma_ac"], counts["gamma_ab"] + counts["gamma_bd"])
    if counts["gamma_cd"] != n[3] - n[2]:
        raise Inconclusive("winding numbers fail the cross-check arc")
    return n


_CAP_LABELS = {
    (0, 0): "trivial",
    (1, 0): "a",
    (0, 1): "b",
    (1, 1): "c",
}


def capped_class(surface, curve: MultiCurve):
    """Boundary label of the curve after filling hole d with a disk.

    On the capped surface every simple closed curve is parallel to one of
    the remaining holes a, b, c or contracts; the label is decided by the
    winding class (n_a - n_c, n_b - n_c) with the hole-d winding removed.
    Returns (label, total weight).
    """
    if len(curve.components) != 1:
        raise InputError("classification expects a single component")
    comp = curve.components[0]
    if comp.kind != "loop":
        raise InputError("classification expects a closed curve")
    # Windings describe the unweighted loop; the weight rides along.
    n_a, n_b, n_c, n_d = _winding_vector(
        surface, MultiCurve((replace(comp, weight=1.0),))
    )
    r = (n_a - n_c, n_b - n_c)
    for sgn in (1, -1):
        key = (sgn * r[0], sgn * r[1])
        if key in _CAP_LABELS:
            return _CAP_LABELS[key], comp.weight
    raise Inconclusive(f"winding class {r} is not hole-parallel after capping")


def pants_class(surface, curve: MultiCurve):
    """Boundary label of a closed curve on a three-holed sphere.

    The surface must name the arcs gamma_ab and gamma_ac (oriented
    first-to-second hole); windings are anchored at n_a = 0 and the class
    (n_a - n_c, n_b - n_c) is matched against the hole labels up to sign.
    Returns (label, weight) with label in {"trivial", "a", "b", "c"}.
    """
    for name in ("gamma_ab", "gamma_ac"):
        if name not in surface.named_curves:
            raise InputError("surface does not carry the arcs gamma_ab, gamma_ac")
    if len(curve.components) != 1:
        raise InputError("classification expects a single component")
    comp = curve.components[0]
    if comp.kind != "loop":
        raise InputError("classification expects a closed curve")
    bare = MultiCurve((replace(comp, weight=1.0),))
    counts = {}
    for name in ("gamma_ab", "gamma_ac"):
        s = signed_crossings(surface, bare, surface.named_curves[name])
        if abs(s - round(s)) > 1e-6:
            raise Inconclusive(f"signed count with {name} is not integral: {s}")
        counts[name] = round(s)
    n = (0, counts["gamma_ab"], counts["gamma_ac"])
    r = (n[0] - n[2], n[1] - n[2])
    for sgn in (1, -1):
        key = (sgn * r[0], sgn * r[1])
        if key in _CAP_LABELS:
            return _CAP_LABELS[key], comp.weight
    raise Inconclusive(f"winding class {r} is not hole-parallel")


def pushforward_reduce(embedding, curve: MultiCurve) -> MultiCurve:
    """Image of a curve under a subsurface embedding, reduced downstairs.

    Domain crossings through gluings that become interior seams disappear;
    crossings carried onto codomain gluings keep their geometric position.
    Components whose image no longer crosses anything are contractible in
    one chart and are dropped.  Arc endpoints must land on codomain
    boundary edges, otherwise the image is not a relative arc.
    """
    R, S = embedding.domain, embedding.codomain
    validate_curve(R, curve)
    pushed = []
    for comp in curve:
        kept, kept_params = [], []
        for m, (p, i) in enumerate(comp.crossings):
            if R.is_boundary_edge(p, i):
                status = embedding.edge_image(p, i)
                if status[0] != "edge" or not S.is_boundary_edge(*status[1]):
                    raise InputError(
                        "arc endpoint maps off the codomain boundary; "
                        "the image is not a relative arc"
                    )
            else:
                k = R.gluing_index(p, i)
                gs = embedding.gluing_status(k)
                if gs[0] == "interior":
                    continue
                status = embedding.edge_image(p, i)
            q, j = status[1]
            kept.append((q, j))
            t = comp.params[m] if comp.params is not None else 0.5
            z = embedding.placements[p].apply(R.edge_point(p, i, t))
            kept_params.append(min(1.0, max(0.0, S.edge_param(q, j, z))))
        if comp.kind == "loop" and not kept:
            continue
        pushed.append(
            Component(comp.kind, tuple(kept), comp.weight, tuple(kept_params))
        )
    return reduce(S, MultiCurve(tuple(pushed)))


# ---------------------------------------------------------------------------
# Train tracks with transverse measures


@dataclass(frozen=True)
class Branch:
    """One corridor of a track.  `path` lists the gluing crossings from
    end 0 to end 1; the reverse run crosses the partner edges backwards.
    Strand slots keep their transverse index along the corridor, so a
    twisted corridor is expressed by reversing that end's listing inside
    its switch side."""

    path: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "path", tuple((int(p), int(i)) for p, i in self.path)
        )


@dataclass(frozen=True)
class Switch:
    """Two-sided partition of the branch ends meeting at one point, each
    side in transverse order.  Entries are (branch index, end 0|1)."""

    left: tuple[tuple[int, int], ...]
    right: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(tuple(e) for e in self.left))
        object.__setattr__(self, "right", tuple(tuple(e) for e in self.right))
        if not self.left or not self.right:
            raise ValidationError("both sides of a switch must be non-empty")


_REGION_KINDS = ("disk", "punctured-disk", "other")


@dataclass(frozen=True)
class Region:
    kind: str
    cusps: int

    def __post_init__(self):
        if self.kind not in _REGION_KINDS:
            raise ValidationError(f"unknown region kind {self.kind!r}")
        if self.cusps < 0:
            raise ValidationError("cusp count must be nonnegative")


@dataclass(frozen=True)
class TrainTrack:
    surface: object
    branches: tuple[Branch, ...]
    switches: tuple[Switch, ...]
    regions: tuple[Region, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "switches", tuple(self.switches))
        object.__setattr__(self, "regions", tuple(self.regions))
        seen = {}
        for si, sw in enumerate(self.switches):
            for side, ends in ((0, sw.left), (1, sw.right)):
                for pos, (b, e) in enumerate(ends):
                    if not (0 <= b < len(self.branches)) or e not in (0, 1):
                        raise ValidationError(f"switch {si} references bad end ({b},{e})")
                    if (b, e) in seen:
                        raise ValidationError(f"branch end ({b},{e}) attached twice")
                    seen[(b, e)] = (si, side, pos)
        for b in range(len(self.branches)):
            for e in (0, 1):
                if (b, e) not in seen:
                    raise ValidationError(f"branch end ({b},{e}) is unattached")
        object.__setattr__(self, "_attach", seen)

    def attachment(self, b: int, e: int):
        """(switch index, side 0|1, position) of a branch end."""
        return self._attach[(b, e)]

    @property
    def taut(self) -> bool:
        for r in self.regions:
            if r.kind == "disk" and r.cusps <= 1:
                return False
            if r.kind == "punctured-disk" and r.cusps == 0:
                return False
        return True


_WEIGHT_TAGS = ("real", "rational", "integral")


@dataclass(frozen=True)
class BranchWeights:
    """Candidate transverse measure; zero entries are allowed so that the
    degenerate all-zero measure has a home."""

    values: tuple
    tag: str = "real"

    def __post_init__(self):
        if self.tag not in _WEIGHT_TAGS:
            raise InputError(f"unknown weight tag {self.tag!r}")
        if self.tag == "integral":
            vals = []
            for v in self.values:
                if isinstance(v, float) and v != int(v):
                    raise InputError(f"integral weights required, got {v}")
                vals.append(int(v))
            vals = tuple(vals)
        elif self.tag == "rational":
            vals = tuple(Fraction(v) for v in self.values)
        else:
            vals = tuple(float(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise InputError("branch weights must be nonnegative")
        object.__setattr__(self, "values", vals)


def _side_sum(weights, ends):
    return sum(weights[b] for b, _ in ends)


def switch_check(track: TrainTrack, w: BranchWeights) -> bool:
    """True when both sides of every switch carry equal total weight.
    Exact comparison for rational and integral tags."""
    if len(w.values) != len(track.branches):
        raise InputError("weight vector length does not match branch count")
    if w.tag in ("rational", "integral"):
        return all(
            _side_sum(w.values, sw.left) == _side_sum(w.values, sw.right)
            for sw in track.switches
        )
    tol = 1e-9 * max(1.0, max((abs(v) for v in w.values), default=1.0))
    return all(
        abs(_side_sum(w.values, sw.left) - _side_sum(w.values, sw.right)) <= tol
        for sw in track.switches
    )


def trace_strands(track: TrainTrack, counts):
    """Loops traced by replacing each branch with `counts[b]` parallel
    strands, joined at switches by stacking each side in its listed order.

    Returns loops as lists of (branch, forward) steps.
    """
    counts = [int(v) for v in counts]
    if any(v < 0 for v in counts):
        raise InputError("strand counts must be nonnegative")

    def side_ends(sw, side):
        return sw.left if side == 0 else sw.right

    def offset_of(si, side, pos):
        ends = side_ends(track.switches[si], side)
        return sum(counts[b] for b, _ in ends[:pos])

    def end_at(si, side, slot):
        acc = 0
        for b, e in side_ends(track.switches[si], side):
            if slot < acc + counts[b]:
                return (b, e), slot - acc
            acc += counts[b]
        raise AssertionError("slot outside the side stack")

    loops = []
    visited = set()
    for b0 in range(len(track.branches)):
        for j0 in range(counts[b0]):
            if (b0, 1, j0) in visited:
                continue
            loop = []
            state = (b0, 1, j0)  # heading toward end 1: a forward run
            while state not in visited:
                visited.add(state)
                b, target, j = state
                # The same geometric strand run backwards.
                visited.add((b, 1 - target, j))
                loop.append((b, target == 1))
                si, side, pos = track.attachment(b, target)
                slot = offset_of(si, side, pos) + j
                (b2, e2), j2 = end_at(si, 1 - side, slot)
                state = (b2, 1 - e2, j2)
            if state != (b0, 1, j0):
                raise AssertionError("strand orbit failed to close on its seed")
            loops.append(loop)
    return loops


def _loop_to_crossings(surface, track, loop):
    word = []
    for b, forward in loop:
        path = track.branches[b].path
        if forward:
            word.extend(path)
        else:
            word.extend(surface.partner(p, i) for p, i in reversed(path))
    return tuple(word)


def weights_to_multicurve(track: TrainTrack, w: BranchWeights) -> MultiCurve:
    """Realize an integral measure as the reduced carried multi-curve."""
    if w.tag != "integral":
        raise InputError("carried curves need integral weights")
    if not switch_check(track, w):
        raise InputError("weights violate a switch condition")
    if all(v == 0 for v in w.values):
        return MultiCurve(())
    comps = []
    for loop_steps in trace_strands(track, w.values):
        word = _loop_to_crossings(track.surface, track, loop_steps)
        if not word:
            continue  # strand stays in one polygon: contractible
        comps.append(Component("loop", word, 1.0))
    return reduce(track.surface, MultiCurve(tuple(comps)))


def _rational_kernel(rows, ncols):
    """Basis of the null space of a small exact rational matrix."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -m[ri][fc]
        basis.append(v)
    return basis


def _switch_matrix(track: TrainTrack):
    rows = []
    for sw in track.switches:
        row = [Fraction(0)] * len(track.branches)
        for b, _ in sw.left:
            row[b] += 1
        for b, _ in sw.right:
            row[b] -= 1
        rows.append(row)
    return rows


def approximate(track: TrainTrack, w: BranchWeights, n: int, denominator_cap: int = 10**9):
    """Rational measure within 2^-n of w in sup norm, switch-exact,
    returned as (lam, curve) with lam a positive Fraction and curve the
    carried multi-curve of the cleared-denominator integral measure.
    """
    import numpy as np

    if n < 0:
        raise InputError("approximation index must be nonnegative")
    if not switch_check(track, w):
        raise InputError("weights violate a switch condition")
    if not track.taut:
        raise InputError("approximation requires a taut track")
    if w.tag == "integral":
        return Fraction(1), weights_to_multicurve(track, w)

    wf = [float(v) for v in w.values]
    scale_w = max(wf) if wf else 0.0
    if scale_w == 0.0:
        return Fraction(1), MultiCurve(())
    target = 2.0**-n * scale_w

    basis = _rational_kernel(_switch_matrix(track), len(track.branches))
    if not basis:
        raise InputError("track admits no nonzero transverse measures")
    B = np.array([[float(x) for x in v] for v in basis]).T
    coords, *_ = np.linalg.lstsq(B, np.array(wf), rcond=None)
    resid = float(np.max(np.abs(B @ coords - np.array(wf))))
    if resid > 0.5 * target:
        raise InputError("weights sit too far from the switch-condition space")

    max_entry = max(abs(x) for v in basis for x in v)
    delta = 0.5 * target / (len(basis) * float(max_entry))
    need = int(math.ceil(1.0 / delta)) + 1
    cap = min(denominator_cap, need)
    coords_q = [Fraction(float(c)).limit_denominator(cap) for c in coords]
    wn = [
        sum(c * v[i] for c, v in zip(coords_q, basis))
        for i in range(len(track.branches))
    ]
    achieved = max(abs(float(x) - y) for x, y in zip(wn, wf))
    if achieved > target:
        raise InputError(
            f"denominator cap {denominator_cap} reached: achieved sup error "
            f"{achieved:.3e} exceeds the 2^-{n} target {target:.3e}"
        )
    if any(x < 0 for x in wn):
        raise InputError("rational approximant left the nonnegative cone")

    denom_lcm = 1
    for x in wn:
        denom_lcm = denom_lcm * x.denominator // math.gcd(denom_lcm, x.denominator)
    nums = [int(x * denom_lcm) for x in wn]
    g = 0
    for v in nums:
        g = math.gcd(g, v)
    if g == 0:
        return Fraction(1), MultiCurve(())
    lam = Fraction(g, denom_lcm)
    counts = [v // g for v in nums]
    curve = weights_to_multicurve(track, BranchWeights(tuple(counts), "integral"))
    return lam, curve


def loop_track(surface, crossings) -> TrainTrack:
    """Track with a single closed branch along the given crossing loop."""
    br = Branch(tuple(crossings))
    sw = Switch(left=((0, 1),), right=((0, 0),))
    # The complement of an essential loop has no disk pieces on the shipped
    # surfaces; callers with other geometry should build regions themselves.
    return TrainTrack(surface, (br,), (sw,), (Region("other", 0),))


def torus_theta_track(surface) -> TrainTrack:
    """Theta-shaped track on a square torus carrying the slopes q >= p >= 0
    as measures (p, q - p, q) on (crossing, connector, climbing) branches."""
    a = Branch(((0, 1),))  # crosses the right edge once
    b = Branch(())  # connector inside the square
    c = Branch(((0, 2),))  # crosses the top edge once
    switches = (
        Switch(left=((2, 1),), right=((1, 0), (0, 0))),
        Switch(left=((0, 1), (1, 1)), right=((2, 0),)),
    )
    # Complement of a spine: one disk, one cusp at each switch.
    regions = (Region("disk", 2),)
    return TrainTrack(surface, (a, b, c), switches, regions)

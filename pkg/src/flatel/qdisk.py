"""Area measures of integrable quadratic differentials on the unit disk.

Densities are |q| for q a polynomial differential, optionally divided by
z (a simple pole at the origin; in polar coordinates the pole cancels
against the area element, so no special quadrature is needed).  Regions
are boolean combinations of disks and centered annuli, integrated in
polar coordinates: Gauss-Legendre panels in radius split at the radii
where the region's angular cross-section changes shape, and in angle
either a trapezoid rule over the full circle (spectral for the periodic
integrand) or Gauss-Legendre on each angular arc of the cross-section.
Node counts double until two successive estimates agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.polynomial.polynomial import polyval

from .errors import Inconclusive, InputError

TWO_PI = 2.0 * math.pi
_FULL = ((0.0, TWO_PI),)


# ---------------------------------------------------------------------------
# Regions: boolean combinations of disks, with exact angular cross-sections


def _norm_arcs(raw):
    """Disjoint sorted subintervals of [0, 2pi] covering the same set."""
    split = []
    for s, e in raw:
        length = e - s
        if length <= 0:
            continue
        if length >= TWO_PI - 1e-14:
            return _FULL
        s %= TWO_PI
        e = s + length
        if e <= TWO_PI:
            split.append((s, e))
        else:
            split.append((s, TWO_PI))
            split.append((0.0, e - TWO_PI))
    split.sort()
    merged = []
    for s, e in split:
        if merged and s <= merged[-1][1] + 1e-14:
            merged[-1] = (merged[-1][0], max(merged[-1][1], e))
        else:
            merged.append((s, e))
    return tuple(merged)


def _arc_complement(arcs):
    if not arcs:
        return _FULL
    if arcs == _FULL:
        return ()
    out = []
    prev = 0.0
    for s, e in arcs:
        if s > prev:
            out.append((prev, s))
        prev = max(prev, e)
    if prev < TWO_PI:
        out.append((prev, TWO_PI))
    return tuple(out)


def _arc_intersect(a, b):
    out = []
    for s1, e1 in a:
        for s2, e2 in b:
            s, e = max(s1, s2), min(e1, e2)
            if e > s:
                out.append((s, e))
    return tuple(out)


def _arc_union(a, b):
    return _norm_arcs(list(a) + list(b))


class Region:
    """Base: angular cross-sections, radial breakpoints, membership."""

    def arcs(self, r: float):
        raise NotImplementedError

    def breakpoints(self):
        raise NotImplementedError

    def contains(self, z):
        raise NotImplementedError

    def concentric(self) -> bool:
        """True when every cross-section is the full circle or empty."""
        raise NotImplementedError


@dataclass(frozen=True)
class Disk(Region):
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0:
            raise InputError("disk radius must be positive")

    def arcs(self, r):
        c = abs(self.center)
        if c < 1e-15:
            return _FULL if r < self.radius else ()
        if r < 1e-15:
            return _FULL if c < self.radius else ()
        x = (r * r + c * c - self.radius**2) / (2.0 * r * c)
        if x <= -1.0:
            return _FULL
        if x >= 1.0:
            return ()
        half = math.acos(x)
        alpha = math.atan2(self.center.imag, self.center.real)
        return _norm_arcs([(alpha - half, alpha + half)])

    def breakpoints(self):
        c = abs(self.center)
        return tuple(
            b for b in (abs(c - self.radius), c + self.radius) if 0.0 < b < 1.0
        )

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) < self.radius

    def concentric(self):
        return abs(self.center) < 1e-15


@dataclass(frozen=True)
class Annulus(Region):
    inner: float
    outer: float

    def __post_init__(self):
        if not 0 <= self.inner < self.outer:
            raise InputError("annulus needs 0 <= inner < outer")

    def arcs(self, r):
        return _FULL if self.inner < r < self.outer else ()

    def breakpoints(self):
        return tuple(b for b in (self.inner, self.outer) if 0.0 < b < 1.0)

    def contains(self, z):
        a = np.abs(np.asarray(z))
        return (self.inner < a) & (a < self.outer)

    def concentric(self):
        return True


@dataclass(frozen=True)
class Union(Region):
    first: Region
    second: Region

    def arcs(self, r):
        return _arc_union(self.first.arcs(r), self.second.arcs(r))

    def breakpoints(self):
        return tuple(self.first.breakpoints()) + tuple(self.second.breakpoints())

    def contains(self, z):
        return self.first.contains(z) | self.second.contains(z)

    def concentric(self):
        return self.first.concentric() and self.second.concentric()


@dataclass(frozen=True)
class Diff(Region):
    keep: Region
    drop: Region

    def arcs(self, r):
        return _arc_intersect(self.keep.arcs(r), _arc_complement(self.drop.arcs(r)))

    def breakpoints(self):
        return tuple(self.keep.breakpoints()) + tuple(self.drop.breakpoints())

    def contains(self, z):
        return self.keep.contains(z) & ~self.drop.contains(z)

    def concentric(self):
        return self.keep.concentric() and self.drop.concentric()


@dataclass(frozen=True)
class Empty(Region):
    def arcs(self, r):
        return ()

    def breakpoints(self):
        return ()

    def contains(self, z):
        return np.zeros(np.shape(z), dtype=bool)

    def concentric(self):
        return True


class _Preimage(Region):
    """Preimage of a region under z -> z^2 (two square-root copies)."""

    def __init__(self, base: Region):
        self.base = base

    def arcs(self, r):
        inner = self.base.arcs(r * r)
        if inner == _FULL:
            return _FULL
        halved = [(s / 2.0, e / 2.0) for s, e in inner]
        return _norm_arcs(halved + [(s + math.pi, e + math.pi) for s, e in halved])

    def breakpoints(self):
        return tuple(math.sqrt(b) for b in self.base.breakpoints())

    def contains(self, z):
        return self.base.contains(np.asarray(z) ** 2)

    def concentric(self):
        return self.base.concentric()


UNIT_DISK = Disk(0j, 1.0)


def parse_region(text: str) -> Region:
    """Mini-grammar: disk(a_re,a_im,r) | annulus(r1,r2) | diff(R1,R2) |
    union(R1,R2), nested freely."""
    s = text.strip().lower()
    pos = 0

    def fail(msg):
        raise InputError(f"bad region {text!r}: {msg}")

    def skip():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        skip()
        if pos >= len(s) or s[pos] != ch:
            fail(f"expected {ch!r} at offset {pos}")
        pos += 1

    def number():
        nonlocal pos
        skip()
        start = pos
        while pos < len(s) and (s[pos] in "+-.e" or s[pos].isdigit()):
            pos += 1
        try:
            return float(s[start:pos])
        except ValueError:
            fail(f"expected a number at offset {start}")

    def region():
        nonlocal pos
        skip()
        for name in ("disk", "annulus", "diff", "union", "empty"):
            if s.startswith(name, pos):
                pos += len(name)
                expect("(")
                if name == "disk":
                    a_re = number(); expect(","); a_im = number(); expect(","); r = number()
                    out = Disk(complex(a_re, a_im), r)
                elif name == "annulus":
                    r1 = number(); expect(","); r2 = number()
                    out = Annulus(r1, r2)
                elif name == "empty":
                    out = Empty()
                else:
                    first = region(); expect(","); second = region()
                    out = Diff(first, second) if name == "diff" else Union(first, second)
                expect(")")
                return out
        fail(f"expected a region at offset {pos}")

    out = region()
    skip()
    if pos != len(s):
        fail(f"trailing input at offset {pos}")
    return out


# ---------------------------------------------------------------------------
# Densities


@dataclass(frozen=True)
class DiskDifferential:
    """q(z) = (sum c_k z^k) (dz)^2, divided by z when pole is set."""

    coefficients: tuple
    pole: bool = False
    radial: int = 256
    angular: int = 512

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not coeffs:
            raise InputError("need at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    def density(self, z):
        out = np.abs(polyval(np.asarray(z), self.coefficients))
        if self.pole:
            out = out / np.abs(z)
        return out

    def polar_integrand(self, z, r):
        """density(z) * r evaluated stably (the simple pole cancels)."""
        mag = np.abs(polyval(np.asarray(z), self.coefficients))
        return mag if self.pole else mag * r


@dataclass(frozen=True)
class MobiusDensity:
    """|phi_w'|^2 for phi_w(z) = (z - w)/(1 - conj(w) z): the pullback of
    the euclidean area under the disk automorphism sending w to 0."""

    w: complex
    radial: int = 256
    angular: int = 512
    pole: bool = False

    def density(self, z):
        z = np.asarray(z)
        return (1.0 - abs(self.w) ** 2) ** 2 / np.abs(
            1.0 - np.conj(self.w) * z
        ) ** 4

    def polar_integrand(self, z, r):
        return self.density(z) * r

    def suggested_breakpoints(self):
        a = abs(self.w)
        return tuple(b for b in (a, 0.5 * (1.0 + a)) if 0.0 < b < 1.0)


def mobius_push(w) -> MobiusDensity:
    w = complex(w)
    if abs(w) >= 1.0:
        raise InputError(f"point {w} is not in the open unit disk")
    return MobiusDensity(w)


class _SquaredPull:
    """Density of the pullback of q under z -> z^2."""

    def __init__(self, q: DiskDifferential):
        self.q = q
        self.radial = q.radial
        self.angular = q.angular
        self.pole = False

    def polar_integrand(self, z, r):
        z = np.asarray(z)
        mag = np.abs(polyval(z * z, self.q.coefficients))
        if self.q.pole:
            return 4.0 * mag * r
        return 4.0 * mag * r * r * r


# ---------------------------------------------------------------------------
# Quadrature


@lru_cache(maxsize=None)
def _gauss(n: int):
    x, w = leggauss(n)
    return x, w


def _angular_full(n: int):
    theta = np.arange(n) * (TWO_PI / n)
    return theta, TWO_PI / n


def _estimate(q, region, panels, n_r, n_th):
    total = 0.0
    conc = region.concentric()
    theta, wth = _angular_full(n_th)
    phase = np.exp(1j * theta)
    x, w = _gauss(n_r)
    for ra, rb in panels:
        mid, half = 0.5 * (ra + rb), 0.5 * (rb - ra)
        radii = mid + half * x
        weights = half * w
        if conc:
            if not region.arcs(mid):
                continue
            for lo in range(0, n_r, 256):
                rblk = radii[lo : lo + 256]
                wblk = weights[lo : lo + 256]
                z = rblk[:, None] * phase[None, :]
                f = q.polar_integrand(z, rblk[:, None])
                total += float(np.sum(wblk[:, None] * f) * wth)
        else:
            arc_n = max(16, n_th // 8)
            ax, aw = _gauss(arc_n)
            for r_i, w_i in zip(radii, weights):
                arcs = region.arcs(float(r_i))
                for s, e in arcs:
                    am, ah = 0.5 * (s + e), 0.5 * (e - s)
                    th = am + ah * ax
                    z = r_i * np.exp(1j * th)
                    f = q.polar_integrand(z, r_i)
                    total += float(w_i * ah * np.sum(aw * f))
    return total


def _panels(q, region):
    bps = {0.0, 1.0}
    bps.update(b for b in region.breakpoints() if 0.0 < b < 1.0)
    extra = getattr(q, "suggested_breakpoints", None)
    if extra is not None:
        bps.update(b for b in extra() if 0.0 < b < 1.0)
    cuts = sorted(bps)
    return [
        (a, b) for a, b in zip(cuts, cuts[1:]) if b - a > 1e-15
    ]


def area_q_with_error(q, region: Region, tol: float = 1e-8):
    """Adaptive quadrature of the area of `region` in the |q| metric.

    Returns (value, error estimate).  Node counts double until two
    consecutive refinements each move the estimate by less than `tol`
    relative; a single agreeing pair is not accepted, because coarse
    grids can straddle a boundary-tangency kink and agree by accident.
    A run that stalls above 100x the target is refused rather than
    reported.
    """
    panels = _panels(q, region)
    if not panels:
        return 0.0, 0.0
    n_r = max(8, int(getattr(q, "radial", 256)) // 8)
    n_th = max(32, int(getattr(q, "angular", 512)) // 8)
    r_cap, th_cap = 1024, 131072
    prev = None
    agreed = 0
    while True:
        val = _estimate(q, region, panels, n_r, n_th)
        if prev is not None:
            delta = abs(val - prev)
            if delta <= tol * max(1.0, abs(val)):
                agreed += 1
                if agreed >= 2:
                    return val, delta
            else:
                agreed = 0
            if n_r >= r_cap and n_th >= th_cap:
                if delta <= 100.0 * tol * max(1.0, abs(val)):
                    return val, delta
                raise Inconclusive(
                    f"quadrature stalled at error {delta:.3e} "
                    f"(target {tol:.1e}, {n_r} radial x {n_th} angular nodes)"
                )
        prev = val
        n_r = min(2 * n_r, r_cap)
        n_th = min(2 * n_th, th_cap)


def area_q(q, region: Region, tol: float = 1e-8) -> float:
    return area_q_with_error(q, region, tol)[0]


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class SmallAreaReport:
    radius: float
    inner: float
    total: float
    bound: float
    passed: bool


def verify_small_area(q, r: float, slack: float = 1e-8) -> SmallAreaReport:
    """Check the concentric small-area inequality A(D(0,r)) <= r^2 A(D)."""
    r = float(r)
    if not 0.0 < r < 1.0:
        raise InputError("radius must lie in (0, 1)")
    inner = area_q(q, Disk(0j, r))
    total = area_q(q, UNIT_DISK)
    bound = r * r * total + slack
    return SmallAreaReport(r, inner, total, bound, inner <= bound)


@dataclass(frozen=True)
class RingReport:
    inner_radius: float
    outer_radius: float
    inner_mean: float
    outer_mean: float
    passed: bool


def _ring_integral(q, r: float) -> float:
    n = max(64, int(getattr(q, "angular", 512)) // 4)
    prev = None
    while True:
        theta, wth = _angular_full(n)
        z = r * np.exp(1j * theta)
        val = float(np.sum(q.density(z)) * wth)
        if prev is not None and abs(val - prev) <= 1e-10 * max(1.0, abs(val)):
            return val
        if n >= 65536:
            return val
        prev = val
        n *= 2


def subharmonic_ring_check(q, s: float, r: float) -> RingReport:
    """Angular means of |q| must not decrease with the radius."""
    if not 0.0 < s < r < 1.0:
        raise InputError("need 0 < s < r < 1")
    inner, outer = _ring_integral(q, s), _ring_integral(q, r)
    passed = inner <= outer + 1e-9 * max(1.0, abs(outer))
    return RingReport(s, r, inner, outer, passed)


def concentration_experiment(omega: Region, a: Region, b: Region, ws):
    """Mass ratios of the pushed-forward area as the push point runs
    through ws: rows (n, mass(omega)/mass(disk), mass(b)/mass(disk)).

    `a` must be disjoint from `omega` (it is the region the mass is
    pushed away from); checked on a sample grid.
    """
    rr = np.linspace(0.015, 0.995, 80)
    tt = np.linspace(0.0, TWO_PI, 160, endpoint=False)
    grid = (rr[:, None] * np.exp(1j * tt)[None, :]).ravel()
    if bool(np.any(a.contains(grid) & omega.contains(grid))):
        raise InputError("region a overlaps omega; it must sit in the complement")
    rows = []
    for n, w in enumerate(ws, 1):
        q = mobius_push(w)
        denom = area_q(q, UNIT_DISK)
        if denom <= 0.0:
            raise InputError("density has no mass on the disk")
        rows.append((n, area_q(q, omega) / denom, area_q(q, b) / denom))
    return rows


@dataclass(frozen=True)
class SquaringReport:
    pulled: float
    doubled: float
    relative_error: float
    consistent: bool


def _min_radius(region: Region) -> float:
    cuts = sorted({0.0, 1.0, *[b for b in region.breakpoints() if 0.0 < b < 1.0]})
    for lo, hi in zip(cuts, cuts[1:]):
        if region.arcs(0.5 * (lo + hi)):
            return lo
    return math.inf


def squaring_pullback_check(q: DiskDifferential, region: Region) -> SquaringReport:
    """Pulling back under z -> z^2 doubles the mass of every region."""
    if q.pole and _min_radius(region) < 1e-6:
        raise InputError(
            "region reaches into the pole; the pullback identity is only "
            "checked away from 0"
        )
    lhs = area_q(_SquaredPull(q), _Preimage(region))
    rhs = 2.0 * area_q(q, region)
    err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    consistent = err <= 1e-6 * scale + 1e-15
    rel = err / scale if scale > 0 else 0.0
    return SquaringReport(lhs, rhs, rel, consistent)

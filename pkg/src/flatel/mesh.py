"""P1 finite elements on glued rectangle complexes.

Builds a structured triangle mesh on each polygon (all example polygons are
axis-aligned rectangles, possibly with subdivided sides), identifies nodes
across gluings, and solves two quadratic problems used by the extremal
length bounds:

* plate_energy: Dirichlet energy between two node sets held at 0 and 1 on
  the glued mesh.  Any discrete minimizer overestimates the continuum
  capacity, so the value is a certified upper bound for the extremal
  length of the core of the complementary ring.

* jump_energy: some gluings are cut open and the potential is allowed a
  constant jump across each cut.  For any closed curve, following its
  representative once around shows that the flat-metric length of the
  curve in the metric |grad v| is at least |sum_k j_k N_k| where N_k is
  the signed number of crossings through cut k.  Normalizing that sum to
  one makes 1/energy a certified lower bound for extremal length.  The
  constant-jump constraint holds along entire cuts including endpoints,
  which is what makes the pathwise argument valid for representatives
  that cross the cut lines.

Node identifications with jump offsets are handled by an affine
union-find: each raw grid node stores its offset (a vector over the jump
unknowns) relative to its class root.  Contradictory identifications do
not fail; they emerge as linear constraints among the jumps, which is how
circulation balance around slit endpoints enters the system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from .errors import InputError

# Coarsest grid step at level zero; each level halves it.
BASE_STEP = 0.5

_PARAM_TOL = 1e-9


def _axis_lines(values, level):
    """Gridline coordinates: refine each interval between breakpoints."""
    vals = sorted(set(values))
    lines = [vals[0]]
    for a, b in zip(vals, vals[1:]):
        n = max(1, round((b - a) / BASE_STEP)) * (1 << level)
        for m in range(1, n + 1):
            lines.append(a + (b - a) * m / n)
    return np.array(lines)


@dataclass
class _Grid:
    xs: np.ndarray
    ys: np.ndarray
    ids: np.ndarray  # shape (len(ys), len(xs)), raw node ids


class _AffineUnionFind:
    """Union-find where each element carries v[i] = v[root] + offset_i . j."""

    def __init__(self, n, n_jumps):
        self.parent = np.arange(n)
        self.offset = np.zeros((n, n_jumps))
        self.constraints: list[np.ndarray] = []

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        # Path compression, accumulating offsets to the root.
        while self.parent[i] != root:
            nxt = self.parent[i]
            self.offset[i] += self.offset[nxt]
            self.parent[i] = root
            i = nxt
        return root

    def union(self, i, j, delta):
        """Impose v[j] = v[i] + delta . jumps."""
        ri = self.find(i)
        rj = self.find(j)
        want = self.offset[i] + delta  # offset of j relative to ri
        if ri == rj:
            residual = want - self.offset[j]
            if np.any(np.abs(residual) > 1e-12):
                self.constraints.append(residual.copy())
            return
        self.parent[rj] = ri
        self.offset[rj] = want - self.offset[j]


class Mesh:
    def __init__(self, surface, level=0, cuts=()):
        self.surface = surface
        self.level = int(level)
        self.cuts = tuple(int(c) for c in cuts)
        if len(set(self.cuts)) != len(self.cuts):
            raise InputError("duplicate cut indices")
        for c in self.cuts:
            if not 0 <= c < len(surface.gluings):
                raise InputError(f"cut index {c} out of range")
        self.n_jumps = len(self.cuts)
        self._build_grids()
        self._unify()
        self._assemble()

    # -- construction --------------------------------------------------------

    def _build_grids(self):
        s = self.surface
        tol = s.tol * s.scale
        self.grids: list[_Grid] = []
        n = 0
        coords = []
        for p, poly in enumerate(s.polygons):
            xs_v = [v.real for v in poly]
            ys_v = [v.imag for v in poly]
            for i in range(len(poly)):
                e = s.edge_vector(p, i)
                if abs(e.real) > tol and abs(e.imag) > tol:
                    raise InputError(
                        "mesh builder needs axis-aligned rectangle polygons"
                    )
            x0, x1 = min(xs_v), max(xs_v)
            y0, y1 = min(ys_v), max(ys_v)
            if abs(s.polygon_area(p) - (x1 - x0) * (y1 - y0)) > tol * s.scale:
                raise InputError("polygon is not a full rectangle")
            xs = _axis_lines(xs_v, self.level)
            ys = _axis_lines(ys_v, self.level)
            ids = np.arange(n, n + len(ys) * len(xs)).reshape(len(ys), len(xs))
            n += ids.size
            self.grids.append(_Grid(xs, ys, ids))
            gx, gy = np.meshgrid(xs, ys)
            coords.append(np.column_stack([gx.ravel(), gy.ravel()]))
        self.n_raw = n
        self.coords = np.vstack(coords)
        self.raw_poly = np.concatenate(
            [np.full(g.ids.size, p) for p, g in enumerate(self.grids)]
        )

    def edge_raw_nodes(self, p, i):
        """Raw node ids along edge (p, i) with their edge parameters."""
        s = self.surface
        g = self.grids[p]
        a, b = s.edge_vertices(p, i)
        vec = b - a
        out = []
        if abs(vec.real) <= abs(vec.imag):  # vertical edge
            ix = int(np.argmin(np.abs(g.xs - a.real)))
            if abs(g.xs[ix] - a.real) > _PARAM_TOL * max(1.0, s.scale):
                raise InputError("edge does not sit on a gridline")
            lo, hi = sorted((a.imag, b.imag))
            for iy, y in enumerate(g.ys):
                if lo - _PARAM_TOL <= y <= hi + _PARAM_TOL:
                    t = (y - a.imag) / vec.imag
                    out.append((int(g.ids[iy, ix]), t))
        else:
            iy = int(np.argmin(np.abs(g.ys - a.imag)))
            if abs(g.ys[iy] - a.imag) > _PARAM_TOL * max(1.0, s.scale):
                raise InputError("edge does not sit on a gridline")
            lo, hi = sorted((a.real, b.real))
            for ix, x in enumerate(g.xs):
                if lo - _PARAM_TOL <= x <= hi + _PARAM_TOL:
                    t = (x - a.real) / vec.real
                    out.append((int(g.ids[iy, ix]), t))
        out.sort(key=lambda it: it[1])
        return out

    def _paired_nodes(self, gl):
        """Matched raw node pairs (a_node, b_node) along one gluing."""
        nodes_a = self.edge_raw_nodes(*gl.a)
        nodes_b = self.edge_raw_nodes(*gl.b)
        if len(nodes_a) != len(nodes_b):
            raise InputError("mesh subdivision mismatch across a gluing")
        pairs = []
        for (na, ta), (nb, tb) in zip(nodes_a, reversed(nodes_b)):
            if abs((1.0 - ta) - tb) > 1e-7:
                raise InputError("mesh node parameters mismatch across a gluing")
            pairs.append((na, nb))
        return pairs

    def _unify(self):
        s = self.surface
        uf = _AffineUnionFind(self.n_raw, self.n_jumps)
        cut_rank = {c: k for k, c in enumerate(self.cuts)}
        zero = np.zeros(self.n_jumps)
        for gi, gl in enumerate(s.gluings):
            pairs = self._paired_nodes(gl)
            if gi in cut_rank:
                delta = zero.copy()
                delta[cut_rank[gi]] = 1.0  # v(b side) = v(a side) + j_k
                for na, nb in pairs:
                    uf.union(na, nb, delta)
            else:
                for na, nb in pairs:
                    uf.union(na, nb, zero)
        roots = {}
        self.root_dof = np.empty(self.n_raw, dtype=np.int64)
        self.offsets = np.empty((self.n_raw, self.n_jumps))
        for i in range(self.n_raw):
            r = uf.find(i)
            if r not in roots:
                roots[r] = len(roots)
            self.root_dof[i] = roots[r]
            self.offsets[i] = uf.offset[i]
        self.n_roots = len(roots)
        # Deduplicate derived jump constraints.
        uniq: list[np.ndarray] = []
        for c in uf.constraints:
            norm = np.max(np.abs(c))
            if norm <= 1e-12:
                continue
            cn = c / norm
            if not any(np.allclose(cn, u, atol=1e-9) for u in uniq) and not any(
                np.allclose(-cn, u, atol=1e-9) for u in uniq
            ):
                uniq.append(cn)
        self.jump_constraints = uniq
        # Connected components of the polygon graph under uncut gluings.
        # Cutting can disconnect the mesh up to jumps; each piece carries a
        # free additive constant that must be pinned separately.
        parent = list(range(len(s.polygons)))

        def findp(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for gi, gl in enumerate(s.gluings):
            if gi not in cut_rank:
                parent[findp(gl.a[0])] = findp(gl.b[0])
        reps = {}
        for p in range(len(s.polygons)):
            r = findp(p)
            if r not in reps:
                reps[r] = int(self.grids[p].ids[0, 0])
        self.component_reps = sorted(reps.values())

    def _assemble(self):
        tris = []
        for g in self.grids:
            ny, nx = g.ids.shape
            a = g.ids[:-1, :-1].ravel()
            b = g.ids[:-1, 1:].ravel()
            c = g.ids[1:, 1:].ravel()
            d = g.ids[1:, :-1].ravel()
            tris.append(np.column_stack([a, b, c]))
            tris.append(np.column_stack([a, c, d]))
        self.triangles = np.vstack(tris)
        pts = self.coords[self.triangles]  # (n_tri, 3, 2)
        x = pts[:, :, 0]
        y = pts[:, :, 1]
        bvec = np.stack(
            [y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1
        )
        cvec = np.stack(
            [x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1
        )
        area2 = bvec[:, 0] * cvec[:, 1] - bvec[:, 1] * cvec[:, 0]
        # area2 = 2 * signed area; grid triangles are CCW so area2 > 0.
        self.tri_area = 0.5 * area2
        kloc = (
            bvec[:, :, None] * bvec[:, None, :] + cvec[:, :, None] * cvec[:, None, :]
        ) / (2.0 * area2)[:, None, None]
        rows = np.repeat(self.triangles, 3, axis=1).ravel()
        cols = np.tile(self.triangles, (1, 3)).ravel()
        self.K_raw = sparse.coo_matrix(
            (kloc.ravel(), (rows, cols)), shape=(self.n_raw, self.n_raw)
        ).tocsr()
        # Raw node values in terms of [root DOFs, jumps].
        n_dof = self.n_roots + self.n_jumps
        data = [np.ones(self.n_raw)]
        rows_t = [np.arange(self.n_raw)]
        cols_t = [self.root_dof]
        for k in range(self.n_jumps):
            nz = np.nonzero(self.offsets[:, k])[0]
            if nz.size:
                rows_t.append(nz)
                cols_t.append(np.full(nz.size, self.n_roots + k))
                data.append(self.offsets[nz, k])
        self.T = sparse.coo_matrix(
            (
                np.concatenate(data),
                (np.concatenate(rows_t), np.concatenate(cols_t)),
            ),
            shape=(self.n_raw, n_dof),
        ).tocsr()
        self.K = (self.T.T @ self.K_raw @ self.T).tocsr()

    # -- node sets ------------------------------------------------------------

    def gluing_dofs(self, k):
        gl = self.surface.gluings[k]
        return {int(self.root_dof[n]) for n, _ in self.edge_raw_nodes(*gl.a)}

    def boundary_dofs(self):
        glued = set()
        for gl in self.surface.gluings:
            glued.add(gl.a)
            glued.add(gl.b)
        out = set()
        for p, i in self.surface.all_edges():
            if (p, i) not in glued:
                for n, _ in self.edge_raw_nodes(p, i):
                    out.add(int(self.root_dof[n]))
        return out


def build_mesh(surface, level=0, cuts=()):
    return Mesh(surface, level, cuts)


def plate_energy(mesh: Mesh, plate0, plate1) -> float:
    """Dirichlet energy of the mesh minimizer with plate values 0 and 1.

    Certified upper bound for the continuum capacity, since the discrete
    minimizer is an admissible competitor.  Requires an uncut mesh.
    """
    if mesh.n_jumps:
        raise InputError("plate_energy needs an uncut mesh")
    p0 = set(map(int, plate0))
    p1 = set(map(int, plate1))
    if p0 & p1:
        raise InputError("plates overlap after identification")
    n = mesh.n_roots
    values = np.zeros(n)
    fixed = np.zeros(n, dtype=bool)
    for d in p0:
        fixed[d] = True
    for d in p1:
        fixed[d] = True
        values[d] = 1.0
    free = ~fixed
    K = mesh.K
    if free.any():
        rhs = -K[free][:, fixed] @ values[fixed]
        sol = spsolve(K[free][:, free].tocsc(), rhs)
        values[free] = sol
    return float(values @ (K @ values))


@dataclass
class JumpResult:
    energy: float
    jumps: np.ndarray
    residual: float


def jump_energy(mesh: Mesh, normalization) -> JumpResult | None:
    """Minimize Dirichlet energy subject to sum_k n_k j_k = 1.

    `normalization` is the vector (N_k) of signed curve crossings per cut.
    Returns None when the constraint is infeasible (all N_k zero or the
    derived circulation constraints force the sum to vanish).
    """
    if not mesh.n_jumps:
        raise InputError("jump_energy needs at least one cut")
    nvec = np.asarray(normalization, dtype=float)
    if nvec.shape != (mesh.n_jumps,):
        raise InputError("normalization length must match number of cuts")
    if np.all(np.abs(nvec) < 1e-12):
        return None
    n_dof = mesh.n_roots + mesh.n_jumps
    rows = []
    # Pin one raw value per uncut component to remove all constant modes
    # (a cut can split the mesh into pieces whose constants trade off
    # against jump values, a pure gauge freedom).
    for rep in mesh.component_reps:
        rows.append(mesh.T[rep].toarray().ravel())
    for c in mesh.jump_constraints:
        row = np.zeros(n_dof)
        row[mesh.n_roots :] = c
        rows.append(row)
    norm_row = np.zeros(n_dof)
    norm_row[mesh.n_roots :] = nvec
    rows.append(norm_row)
    A_full = np.array(rows)
    b_full = np.zeros(len(rows))
    b_full[-1] = 1.0
    # Row-reduce: derived constraints may be linearly dependent, and the
    # normalization may be inconsistent with them (certificate infeasible).
    u, sv, vt = np.linalg.svd(A_full, full_matrices=False)
    rank = int(np.sum(sv > (sv[0] * 1e-12 if sv.size else 0.0)))
    if rank == 0:
        return None
    b_red = u[:, :rank].T @ b_full
    if np.max(np.abs(b_full - u[:, :rank] @ b_red)) > 1e-9:
        return None
    A = sparse.csr_matrix(sv[:rank, None] * vt[:rank])
    kkt = sparse.bmat([[2.0 * mesh.K, A.T], [A, None]], format="csc")
    rhs = np.concatenate([np.zeros(n_dof), b_red])
    try:
        sol = spsolve(kkt, rhs)
    except Exception:
        return None
    if not np.all(np.isfinite(sol)):
        return None
    x = sol[:n_dof]
    residual = float(np.max(np.abs(A @ x - b_red)))
    if residual > 1e-6:
        return None
    energy = float(x @ (mesh.K @ x))
    return JumpResult(energy=energy, jumps=x[mesh.n_roots :].copy(), residual=residual)


def signed_cut_crossings(surface, curve, cuts):
    """N_k: weighted signed crossings of the curve through each cut gluing.

    Crossing out through the gluing's a-edge counts +1 (matching the sign
    convention v(b side) = v(a side) + j_k), through the b-edge -1.
    """
    by_edge = {}
    for k, c in enumerate(cuts):
        gl = surface.gluings[c]
        by_edge[gl.a] = (k, 1.0)
        by_edge[gl.b] = (k, -1.0)
    n = np.zeros(len(cuts))
    for comp in curve:
        if comp.kind != "loop":
            raise InputError("cut crossings are defined for loops")
        for x in comp.crossings:
            hit = by_edge.get(tuple(x))
            if hit is not None:
                n[hit[0]] += hit[1] * comp.weight
    return n

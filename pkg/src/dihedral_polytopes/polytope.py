"""Exact V- and H-polytope computations for small lattice polytopes.

Everything here is generic: nothing assumes the dihedral structure, which
is what makes these routines usable as oracles for the closed forms in
:mod:`dihedral_polytopes.models`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb, gcd, lcm
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import Caps, CapacityError
from .exact import (
    LinearSystem,
    LPResult,
    dot,
    integer_kernel_basis,
    integer_rows,
    lp_feasible,
    nullspace,
    primitive_normal,
    primitive_ray,
    rank,
    rref,
    solve,
)

DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class AffineHull:
    """Affine hull of a point set, with a coordinate parametrization.

    ``free`` lists ``dim`` coordinates whose projection is injective on the
    hull.  Every other coordinate ``p`` satisfies
    ``denom * x[p] = coeffs[p] . x[free] + const[p]`` on the hull; on the
    k-th dilate the constant scales by k.
    """

    dim: int
    equations: LinearSystem
    free: tuple[int, ...]
    dependent: tuple[int, ...]
    denom: int
    coeffs: tuple[tuple[int, ...], ...]
    const: tuple[int, ...]


def _hull_of_points(points: Sequence[Sequence[int]], ambient: int) -> AffineHull:
    # (a, c) with a.v + c = 0 for all v  <=>  equation a.x = -c
    M = [list(v) + [1] for v in points]
    kernel = nullspace(M, ambient + 1)
    eq_rows, eq_rhs = [], []
    for vec in kernel:
        prim = primitive_normal(vec)
        eq_rows.append(tuple(prim[:ambient]))
        eq_rhs.append(-prim[ambient])
    eqs = LinearSystem(eq_rows, eq_rhs, ncols=ambient)
    dim = ambient - len(eq_rows)

    # Pivot from the last column backwards so the free coordinates are the
    # earliest ones.
    rev = [list(reversed(row)) + [rhs] for row, rhs in zip(eq_rows, eq_rhs)]
    R, piv = rref(rev, ambient + 1) if rev else ([], [])
    pivots = [ambient - 1 - p for p in piv]
    pivset = set(pivots)
    free = tuple(j for j in range(ambient) if j not in pivset)
    dependent, coeffs, const = [], [], []
    denom = 1
    exprs = []
    for row, p in zip(R, pivots):
        # x_p + sum_{f free} row[rev f] x_f = rhs
        c = [-row[ambient - 1 - f] for f in free]
        exprs.append((p, c, row[ambient]))
        denom = lcm(denom, *(x.denominator for x in c), row[ambient].denominator)
    for p, c, k in sorted(exprs):
        dependent.append(p)
        coeffs.append(tuple(int(x * denom) for x in c))
        const.append(int(k * denom))
    return AffineHull(dim, eqs, free, tuple(dependent), denom, tuple(coeffs), tuple(const))


class VPolytope:
    """Convex hull of finitely many integer points."""

    def __init__(self, vertices: Iterable[Sequence[int]], ambient_dim: Optional[int] = None):
        verts = tuple(tuple(int(x) for x in v) for v in vertices)
        if ambient_dim is None:
            if not verts:
                raise ValueError("ambient_dim is required for an empty vertex list")
            ambient_dim = len(verts[0])
        if any(len(v) != ambient_dim for v in verts):
            raise ValueError("vertex lengths do not match the ambient dimension")
        if len(set(verts)) != len(verts):
            raise ValueError("vertices must be distinct")
        self.vertices = verts
        self.ambient_dim = ambient_dim

    def __repr__(self):
        return f"VPolytope({len(self.vertices)} vertices in Z^{self.ambient_dim})"

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def hull(self) -> AffineHull:
        if not self.vertices:
            raise ValueError("empty polytope has no affine hull")
        return _hull_of_points(self.vertices, self.ambient_dim)

    @property
    def dim(self) -> int:
        return self.hull.dim

    def free_coordinates(self, points=None) -> list[tuple[int, ...]]:
        pts = self.vertices if points is None else points
        return [tuple(p[f] for f in self.hull.free) for p in pts]

    def lift(self, y: Sequence, k: int = 1) -> list[Fraction]:
        """Point of the k-th dilate's hull with free coordinates ``y``."""
        h = self.hull
        x = [Fraction(0)] * self.ambient_dim
        for f, v in zip(h.free, y):
            x[f] = Fraction(v)
        for p, c, k0 in zip(h.dependent, h.coeffs, h.const):
            x[p] = Fraction(dot(c, y) + k * k0, h.denom)
        return x

    @cached_property
    def _prefix_inequalities(self):
        """For each i, integer inequalities of the projection onto the
        first i free coordinates (used to prune lattice enumeration)."""
        pts = self.free_coordinates()
        levels = []
        for i in range(1, self.dim + 1):
            proj = sorted(set(p[:i] for p in pts))
            rows = [(f.normal, f.rhs) for f in _full_dim_facets(proj, i, None)]
            A = np.array([r[0] for r in rows], dtype=np.int64).reshape(len(rows), i)
            b = np.array([r[1] for r in rows], dtype=np.int64)
            levels.append((A, b))
        return levels


@dataclass(frozen=True)
class HPolytope:
    """``equations``: rows ``a.x = b``; ``inequalities``: rows ``a.x >= b``."""

    equations: LinearSystem
    inequalities: LinearSystem

    @property
    def ambient_dim(self) -> int:
        return self.equations.ncols if len(self.equations) else self.inequalities.ncols

    def satisfied_by(self, x) -> bool:
        return all(dot(a, x) == b for a, b in self.equations) and all(
            dot(a, x) >= b for a, b in self.inequalities
        )


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    rhs: int
    incident: frozenset

    def value(self, x):
        return dot(self.normal, x)


def affine_hull(P: VPolytope) -> tuple[int, LinearSystem]:
    h = P.hull
    return h.dim, h.equations


def _full_dim_facets(points, d, caps: Optional[Caps]) -> list[Facet]:
    """Facets of conv(points) for a full-dimensional point set in Z^d."""
    m = len(points)
    if d == 0:
        return []
    if caps is not None and comb(m, d) > caps.max_subsets:
        raise CapacityError(f"{comb(m, d)} candidate vertex subsets exceed the cap {caps.max_subsets}")
    found: dict[frozenset, Facet] = {}
    for subset in combinations(range(m), d):
        if any(set(subset) <= inc for inc in found):
            continue
        p0 = points[subset[0]]
        diffs = [[a - b for a, b in zip(points[s], p0)] for s in subset[1:]]
        # d == 1 leaves no differences; the normal is the unit direction
        kernel = nullspace(diffs, d) if diffs else [[Fraction(1)]]
        if len(kernel) != 1:
            continue
        a = primitive_ray(kernel[0])
        b = dot(a, p0)
        vals = [dot(a, p) for p in points]
        if all(v >= b for v in vals):
            pass
        elif all(v <= b for v in vals):
            a = [-x for x in a]
            b = -b
            vals = [-v for v in vals]
        else:
            continue
        incident = frozenset(i for i, v in enumerate(vals) if v == b)
        if len(incident) == m:
            continue
        found[incident] = Facet(tuple(a), b, incident)
    return sorted(found.values(), key=lambda f: sorted(f.incident))


def facets(P: VPolytope, caps: Caps = DEFAULT_CAPS) -> list[Facet]:
    """Complete irredundant facet list, normals in ``a.x >= b`` form.

    Computed in the free coordinates of the affine hull, so each ambient
    normal is supported on those coordinates; it is unique only modulo the
    hull equations.  Compare facets by their incident vertex sets.
    """
    if P.dim < 1:
        raise ValueError("facets need a polytope of dimension >= 1")
    pts = P.free_coordinates()
    free = P.hull.free
    out = []
    for f in _full_dim_facets(pts, P.dim, caps):
        normal = [0] * P.ambient_dim
        for j, a in zip(free, f.normal):
            normal[j] = a
        out.append(Facet(tuple(normal), f.rhs, f.incident))
    return out


def hdescription(P: VPolytope, caps: Caps = DEFAULT_CAPS) -> HPolytope:
    fs = facets(P, caps)
    ineqs = LinearSystem([f.normal for f in fs], [f.rhs for f in fs], ncols=P.ambient_dim)
    return HPolytope(P.hull.equations, ineqs)


def same_hyperplane(P: VPolytope, normal, rhs, other_normal, other_rhs) -> bool:
    """Whether ``normal.x >= rhs`` and ``other.x >= other_rhs`` agree on the
    affine hull of P up to a positive multiple."""
    eqs = P.hull.equations
    # normal = alpha * other + sum lambda_j E_j ; rhs = alpha * other_rhs + sum lambda_j f_j
    cols = [list(other_normal) + [other_rhs]] + [list(a) + [b] for a, b in eqs]
    M = [list(r) for r in zip(*cols)]
    sol = solve(M, list(normal) + [rhs], len(cols))
    if sol is None:
        return False
    return sol[0] > 0


def face_test_system(P: VPolytope, S: Iterable[int]) -> tuple[LinearSystem, LinearSystem]:
    """``c.v = b`` on S and ``c.v <= b - 1`` off S, in variables ``(c, b)``.

    A gap of 1 loses nothing since any strict separation can be rescaled.
    """
    S = set(S)
    if not S:
        raise ValueError("S must be nonempty")
    N = P.ambient_dim
    eq_rows, ineq_rows = [], []
    for i, v in enumerate(P.vertices):
        row = list(v) + [-1]
        (eq_rows if i in S else ineq_rows).append(row)
    eqs = LinearSystem(eq_rows, [0] * len(eq_rows), ncols=N + 1)
    ineqs = LinearSystem(ineq_rows, [-1] * len(ineq_rows), ncols=N + 1)
    return eqs, ineqs


def face_test(P: VPolytope, S: Iterable[int]) -> LPResult:
    """Decide whether conv(vertices in S) is a face, with a checkable witness
    or Farkas certificate."""
    return lp_feasible(*face_test_system(P, S))


def is_face(P: VPolytope, S: Iterable[int]) -> bool:
    return face_test(P, S).feasible


def check_supporting_functional(P: VPolytope, S: Iterable[int], witness) -> bool:
    """Re-evaluate a face witness ``(c, b)`` on every vertex."""
    S = set(S)
    c, b = witness[:-1], witness[-1]
    for i, v in enumerate(P.vertices):
        val = dot(c, v)
        if i in S and val != b:
            return False
        if i not in S and val > b - 1:
            return False
    return True


def contains(P: VPolytope, x: Sequence) -> bool:
    """Exact membership via convex-combination weights."""
    if len(x) != P.ambient_dim:
        raise ValueError("point length does not match the ambient dimension")
    x = [Fraction(v) for v in x]
    if not all(dot(a, x) == b for a, b in P.hull.equations):
        return False
    y = [x[f] for f in P.hull.free]
    pts = P.free_coordinates()
    m = len(pts)
    eq_rows = [[p[j] for p in pts] for j in range(P.dim)] + [[1] * m]
    eqs = LinearSystem(eq_rows, y + [1], ncols=m)
    ineqs = LinearSystem([[-int(i == j) for j in range(m)] for i in range(m)], [0] * m, ncols=m)
    return lp_feasible(eqs, ineqs).feasible


def _ceil_div(a, b):
    return -((-a) // b)


def _enumerate_free(P: VPolytope, k: int, caps: Caps):
    """Integer points of the projection of kP to its free coordinates,
    restricted to those lifting to lattice points of kP."""
    h = P.hull
    X = np.zeros((1, 0), dtype=np.int64)
    nodes = 0
    for i, (A, b) in enumerate(P._prefix_inequalities, start=1):
        Aprev, alast = A[:, : i - 1], A[:, i - 1]
        r = k * b[None, :] - X @ Aprev.T
        pos, neg, zero = alast > 0, alast < 0, alast == 0
        if zero.any():
            ok = (r[:, zero] <= 0).all(axis=1)
            X, r = X[ok], r[ok]
        lo = _ceil_div(r[:, pos], alast[pos]).max(axis=1)
        hi = (r[:, neg] // alast[neg]).min(axis=1)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        nodes += total
        if nodes > caps.max_lattice_nodes:
            raise CapacityError(f"lattice enumeration exceeded {caps.max_lattice_nodes} nodes")
        keep = counts > 0
        X, lo, counts = X[keep], lo[keep], counts[keep]
        rep = np.repeat(np.arange(len(X)), counts)
        start = np.repeat(np.cumsum(counts) - counts, counts)
        offs = np.arange(total) - start
        X = np.hstack([X[rep], (lo[rep] + offs)[:, None]])
    if h.dependent:
        C = np.array(h.coeffs, dtype=np.int64)
        c0 = np.array(h.const, dtype=np.int64)
        D = X @ C.T + k * c0[None, :]
        X = X[(D % h.denom == 0).all(axis=1)]
    return X


def lattice_points(P: VPolytope, k: int, caps: Caps = DEFAULT_CAPS) -> int:
    """``|kP ∩ Z^ambient|`` by pruned enumeration.

    Walks the free coordinates of the affine hull one at a time; at depth
    i the admissible range comes from the facets of the projection of kP
    onto the first i free coordinates, so no dead prefix survives.  The
    remaining coordinates are solved from the hull equations and kept only
    when integral.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 1
    if P.dim == 0:
        return 1
    return len(_enumerate_free(P, k, caps))


def lattice_point_list(P: VPolytope, k: int, caps: Caps = DEFAULT_CAPS) -> list[tuple[int, ...]]:
    """The lattice points of kP themselves, in ambient coordinates, sorted."""
    if P.dim == 0 or k == 0:
        return [tuple(k * x for x in P.vertices[0])]
    h = P.hull
    X = _enumerate_free(P, k, caps)
    out = np.zeros((len(X), P.ambient_dim), dtype=np.int64)
    out[:, list(h.free)] = X
    if h.dependent:
        C = np.array(h.coeffs, dtype=np.int64)
        c0 = np.array(h.const, dtype=np.int64)
        out[:, list(h.dependent)] = (X @ C.T + k * c0[None, :]) // h.denom
    return sorted(map(tuple, out.tolist()))


def lattice_basis(P: VPolytope) -> list[list[int]]:
    """Basis of the lattice ``Z^ambient ∩ (aff(P) - v0)``."""
    eqs = P.hull.equations
    if not len(eqs):
        return [[int(i == j) for i in range(P.ambient_dim)] for j in range(P.ambient_dim)]
    return integer_kernel_basis(eqs.coeffs, P.ambient_dim)


def lattice_gcd(functional: Sequence[int], basis: Sequence[Sequence[int]]) -> int:
    """gcd of a functional on a lattice basis; the functional is primitive
    on that lattice exactly when this is 1."""
    g = 0
    for b in basis:
        g = gcd(g, dot(functional, b))
    return g


def lattice_coordinates(P: VPolytope, x: Sequence, basis=None) -> list[int]:
    """Coordinates of ``x - v0`` in :func:`lattice_basis`."""
    basis = lattice_basis(P) if basis is None else basis
    v0 = P.vertices[0]
    M = [[b[i] for b in basis] for i in range(P.ambient_dim)]
    z = solve(M, [Fraction(a) - b for a, b in zip(x, v0)], len(basis))
    if z is None or any(v.denominator != 1 for v in z):
        raise ValueError("point is not in the affine lattice of P")
    return [int(v) for v in z]


# --- H to V ---------------------------------------------------------------


def _parametrize(H: HPolytope):
    """``x = x0 + sum_j t_j N_j`` for the equation set, with inequalities
    rewritten as integer rows ``G t >= h``."""
    n = H.ambient_dim
    if len(H.equations):
        x0 = solve(H.equations.coeffs, H.equations.rhs, n)
        if x0 is None:
            return None
        basis = nullspace(H.equations.coeffs, n)
    else:
        x0 = [Fraction(0)] * n
        basis = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    G, h = [], []
    for a, b in H.inequalities:
        row = [dot(a, vec) for vec in basis] + [Fraction(b) - dot(a, x0)]
        ints = integer_rows([row])[0]
        if any(ints[:-1]):
            G.append(ints[:-1])
            h.append(ints[-1])
        elif ints[-1] > 0:
            return None
    return x0, basis, G, h


def _dd_rays(rows: list[list[int]], D: int) -> list[list[int]]:
    """Extreme rays of the pointed cone ``{y : row . y >= 0}`` (double description)."""
    order = []
    for i, row in enumerate(rows):
        if rank([rows[j] for j in order] + [row], D) > len(order):
            order.append(i)
        if len(order) == D:
            break
    K = [rows[i] for i in order]
    rays, zeros = [], []
    for j in range(D):
        e = [int(i == j) for i in range(D)]
        r = primitive_ray(solve(K, e, D))
        rays.append(r)
        zeros.append(frozenset(order[i] for i in range(D) if i != j))
    done = set(order)
    for i, row in enumerate(rows):
        if i in done:
            continue
        vals = [dot(row, r) for r in rays]
        pos = [t for t, v in enumerate(vals) if v > 0]
        neg = [t for t, v in enumerate(vals) if v < 0]
        new_rays = [rays[t] for t, v in enumerate(vals) if v >= 0]
        new_zeros = [zeros[t] | {i} if v == 0 else zeros[t] for t, v in enumerate(vals) if v >= 0]
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if len(common) < D - 2:
                    continue
                if any(t != p and t != q and common <= zeros[t] for t in range(len(rays))):
                    continue
                v = [vals[p] * b - vals[q] * a for a, b in zip(rays[p], rays[q])]
                new_rays.append(primitive_ray(v))
                new_zeros.append(common | {i})
        rays, zeros = new_rays, new_zeros
        done.add(i)
    return rays


def h_vertex_enumeration(H: HPolytope, method: str = "dd", caps: Caps = DEFAULT_CAPS) -> VPolytope:
    """Vertices of a bounded H-polytope.

    ``method="bases"`` solves every square subsystem of tight inequality
    rows (capped); ``method="dd"`` runs an exact double-description pass.
    Both work in a parametrization of the equation space.
    """
    n = H.ambient_dim
    par = _parametrize(H)
    if par is None:
        return VPolytope([], n)
    x0, basis, G, h = par
    d = len(basis)

    def to_x(t):
        return tuple(x0[i] + sum(tj * vec[i] for tj, vec in zip(t, basis)) for i in range(n))

    if d == 0:
        return VPolytope([_as_int(x0)], n) if all(hv <= 0 for hv in h) else VPolytope([], n)

    if method == "bases":
        if comb(len(G), d) > caps.max_subsets:
            raise CapacityError(f"{comb(len(G), d)} bases exceed the cap {caps.max_subsets}")
        if rank(G, d) < d:
            raise ValueError("H-polytope is unbounded")
        pts = set()
        for S in combinations(range(len(G)), d):
            t = solve([G[s] for s in S], [h[s] for s in S], d)
            if t is None or rank([G[s] for s in S], d) < d:
                continue
            if all(dot(g, t) >= hv for g, hv in zip(G, h)):
                pts.add(tuple(t))
        verts = [to_x(t) for t in pts]
    elif method == "dd":
        rows = [list(g) + [-hv] for g, hv in zip(G, h)] + [[0] * d + [1]]
        if rank(rows, d + 1) < d + 1:
            ineqs = LinearSystem([[-x for x in g] for g in G], [-hv for hv in h], ncols=d)
            if not lp_feasible(LinearSystem([], [], ncols=d), ineqs):
                return VPolytope([], n)
            raise ValueError("H-polytope is unbounded")
        verts = []
        for r in _dd_rays(rows, d + 1):
            if r[-1] == 0:
                raise ValueError("H-polytope is unbounded")
            verts.append(to_x([Fraction(v, r[-1]) for v in r[:-1]]))
    else:
        raise ValueError(f"unknown method {method!r}")
    return VPolytope(sorted(set(_as_int(v) for v in verts)), n)


def _as_int(x):
    if any(Fraction(v).denominator != 1 for v in x):
        raise ValueError(f"vertex {x} is not integral")
    return tuple(int(v) for v in x)

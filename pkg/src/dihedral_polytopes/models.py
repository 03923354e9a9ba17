"""Closed-form models of Q_n and DP_n and checks of their structure.

``Q_n`` is the convex hull of the rows of ``W = [I ... I; I R ... R^(n-1)]``
and ``DP_n`` the convex hull of the permutation matrices of D_n.  The
generic routines in :mod:`dihedral_polytopes.polytope` serve as oracles
for every closed form built here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .config import Caps, CapacityError
from .dihedral import (
    DihedralGroup,
    build_V,
    build_V_raw,
    build_W,
    main_coordinate_map,
    permute_columns,
)
from .exact import LinearSystem, dot, rank, solve
from .polytope import (
    DEFAULT_CAPS,
    HPolytope,
    VPolytope,
    contains,
    facets,
    h_vertex_enumeration,
    lattice_basis,
    lattice_gcd,
    lattice_point_list,
    same_hyperplane,
)
from .report import Report


def _coordinate_inequalities(N: int) -> LinearSystem:
    return LinearSystem([[int(i == j) for j in range(N)] for i in range(N)], [0] * N, ncols=N)


def qn_equations(n: int) -> LinearSystem:
    """Affine hull of Q_n: n block-sum equations, then the
    ``(n-1)(n-2)`` equations ``x[kn+j] - x[(k+1)n+j] - x[(k+1)n+j+1] + x[(k+2)n+j+1] = 0``."""
    if n < 2:
        raise ValueError("Q_n needs n >= 2")
    N = n * n
    rows, rhs = [], []
    for l in range(n):
        rows.append([int(l * n <= i < (l + 1) * n) for i in range(N)])
        rhs.append(1)
    for j in range(n - 1):
        for k in range(n - 2):
            row = [0] * N
            row[k * n + j % n] += 1
            row[(k + 1) * n + j % n] -= 1
            row[(k + 1) * n + (j + 1) % n] -= 1
            row[(k + 2) * n + (j + 1) % n] += 1
            rows.append(row)
            rhs.append(0)
    return LinearSystem(rows, rhs, ncols=N)


def compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    out = np.zeros((comb(total + parts - 1, parts - 1), parts), dtype=np.int64)
    for r, combo in enumerate(combinations_with_replacement(range(parts), total)):
        for c in combo:
            out[r, c] += 1
    return out


def qn_structured_count(n: int, k: int, chunk: int = 4096) -> int:
    """Lattice points of kQ_n from its first two blocks.

    Blocks 0 and 1 are arbitrary compositions of k; each later block is
    forced: entries 1..n-1 by the four-term equations, entry 0 by its
    block sum.  A point counts when every forced entry is nonnegative.
    """
    if k == 0:
        return 1
    C = compositions(k, n)
    if n == 2:
        return len(C) ** 2
    total = 0
    for s in range(0, len(C), chunk):
        b0 = C[s : s + chunk]
        prev = np.repeat(b0, len(C), axis=0)
        cur = np.tile(C, (len(b0), 1))
        ok = np.ones(len(prev), dtype=bool)
        for _ in range(n - 2):
            nxt = np.empty_like(cur)
            nxt[:, 1:] = cur[:, :-1] + cur[:, 1:] - prev[:, :-1]
            nxt[:, 0] = k - nxt[:, 1:].sum(axis=1)
            ok &= (nxt >= 0).all(axis=1)
            prev, cur = cur, nxt
        total += int(ok.sum())
    return total


@dataclass
class QnModel:
    n: int
    vpoly: VPolytope = field(init=False)
    hpoly: HPolytope = field(init=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Q_n needs n >= 2")
        N = self.n * self.n
        self.vpoly = VPolytope(build_W(self.n))
        self.hpoly = HPolytope(qn_equations(self.n), _coordinate_inequalities(N))

    @property
    def name(self) -> str:
        return "qn"

    @property
    def dim(self) -> int:
        return 2 * self.n - 2

    def structured_count(self, k: int) -> int:
        return qn_structured_count(self.n, k)

    def ehrhart_cap(self, caps: Caps) -> int:
        return caps.qn_max


# --- DP_n -----------------------------------------------------------------


def odd_block_map(n: int) -> list[int]:
    """Block k of ``build_V(n)`` holds ``R^(-2k)``, the same as block
    ``[-2k]_n`` of ``build_W(n)``."""
    if n % 2 == 0:
        raise ValueError("the block permutation exists only for odd n")
    return [(-2 * k) % n for k in range(n)]


def odd_isomorphism(n: int) -> list[int]:
    """Coordinate permutation ``colmap`` with
    ``permute_columns(build_V(n), colmap) == build_W(n)`` row by row."""
    if n % 2 == 0 or n < 3:
        raise ValueError("odd_isomorphism needs odd n >= 3")
    bmap = odd_block_map(n)
    inv = {m: k for k, m in enumerate(bmap)}
    return [inv[m] * n + e for m in range(n) for e in range(n)]


def even_block_order(n: int) -> list[int]:
    """Source block for each target block so that the exponents of the
    second block row read ``0, 2, ..., n-2, 0, 2, ..., n-2``."""
    return [(-p) % n for p in range(n)]


def even_row_order(n: int) -> list[int]:
    """Vertices with even label first, then odd ("sort rows")."""
    return [r for r in range(2 * n) if r % 2 == 0] + [r for r in range(2 * n) if r % 2 == 1]


def even_sorted_columns(n: int) -> list[int]:
    """Columns of the projected matrix, even in-block positions first ("sort columns").

    Within each half the order is block-major and the in-block index is
    halved, which is what turns each half into a copy of ``build_W(n/2)``.
    """
    m = n // 2
    out = [0] * (n * m)
    for b in range(m):
        for c in range(n):
            t = b * m + c // 2 if c % 2 == 0 else m * m + b * m + (c - 1) // 2
            out[t] = b * n + c
    return out


def _zero_pad_blocks(A, B):
    za, zb = len(A[0]), len(B[0])
    return [list(r) + [0] * zb for r in A] + [[0] * za + list(r) for r in B]


@dataclass
class DPnModel:
    n: int
    vpoly: VPolytope = field(init=False)

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("DP_n needs n >= 3")
        self.vpoly = VPolytope(build_V(self.n))

    @property
    def name(self) -> str:
        return "dpn"

    @property
    def dim(self) -> int:
        return 2 * self.n - 2 if self.n % 2 else 2 * self.n - 3

    @property
    def group(self) -> DihedralGroup:
        return DihedralGroup(self.n)

    @cached_property
    def raw_vertices(self) -> list[list[int]]:
        return build_V_raw(self.n)

    @cached_property
    def even_column_map(self) -> list[int]:
        """Columns of ``build_V`` after the block reordering (even n)."""
        n = self.n
        return [src * n + e for src in even_block_order(n) for e in range(n)]

    @cached_property
    def blockdiag_columns(self) -> list[int]:
        """``build_V`` coordinates read in block-diagonal order (even n)."""
        proj = self.even_column_map[: self.n * self.n // 2]
        return [proj[c] for c in even_sorted_columns(self.n)]

    @cached_property
    def duplicate_pairs(self) -> list[tuple[int, int]]:
        """(dropped, kept) coordinate pairs that coincide on every vertex."""
        cmap, half = self.even_column_map, self.n * self.n // 2
        return [(cmap[half + t], cmap[t]) for t in range(half)]

    @cached_property
    def hpoly(self) -> HPolytope:
        """Closed-form H-description in ``build_V`` coordinates."""
        n, N = self.n, self.n * self.n
        if n % 2:
            colmap = odd_isomorphism(n)
            eq = qn_equations(n)
            rows = []
            for a in eq.coeffs:
                r = [0] * N
                for p, v in enumerate(a):
                    r[colmap[p]] = v
                rows.append(r)
            return HPolytope(LinearSystem(rows, eq.rhs, ncols=N), _coordinate_inequalities(N))
        m = n // 2
        M = m * m
        qe = qn_equations(m)
        local_rows, local_rhs = [], []
        for half in (0, 1):
            off = half * M
            for l in range(1, m):
                r = [0] * (2 * M)
                for i in range(m):
                    r[off + l * m + i] += 1
                    r[off + i] -= 1
                local_rows.append(r)
                local_rhs.append(0)
            for a in qe.coeffs[m:]:
                r = [0] * (2 * M)
                r[off : off + M] = a
                local_rows.append(r)
                local_rhs.append(0)
        r = [0] * (2 * M)
        for i in range(m):
            r[i] = 1
            r[M + i] = 1
        local_rows.append(r)
        local_rhs.append(1)
        cols = self.blockdiag_columns
        rows = []
        for a in local_rows:
            full = [0] * N
            for t, v in enumerate(a):
                full[cols[t]] = v
            rows.append(full)
        rhs = list(local_rhs)
        for dropped, kept in self.duplicate_pairs:
            full = [0] * N
            full[dropped], full[kept] = 1, -1
            rows.append(full)
            rhs.append(0)
        ineqs = LinearSystem([[int(j == c) for j in range(N)] for c in cols], [0] * len(cols), ncols=N)
        return HPolytope(LinearSystem(rows, rhs, ncols=N), ineqs)

    def structured_count(self, k: int) -> int:
        if self.n % 2:
            return qn_structured_count(self.n, k)
        m = self.n // 2
        counts = [qn_structured_count(m, j) for j in range(k + 1)]
        return sum(counts[j] * counts[k - j] for j in range(k + 1))

    def ehrhart_cap(self, caps: Caps) -> int:
        return caps.dpn_odd_max if self.n % 2 else caps.dpn_even_max


def make_model(name: str, n: int):
    if name == "qn":
        return QnModel(n)
    if name == "dpn":
        return DPnModel(n)
    raise ValueError(f"unknown model {name!r}")


# --- verification reports ---------------------------------------------------


def _affine_rank(rows) -> int:
    if len(rows) <= 1:
        return 0
    r0 = rows[0]
    return rank([[a - b for a, b in zip(r, r0)] for r in rows[1:]])


def verify_theorem1(n: int, caps: Caps = DEFAULT_CAPS) -> Report:
    """Dimension, affine hull and facets of Q_n against generic computation."""
    rep = Report(f"qn n={n}")
    model = QnModel(n)
    W = build_W(n)
    eqs = model.hpoly.equations
    N = n * n
    anchor = "Q_n: dim 2n-2, hull equations, facets x_i >= 0"

    def equations_hold():
        bad = [i for i, w in enumerate(W) for a, b in eqs if dot(a, w) != b]
        return not bad, {"violations": len(bad)}

    def equation_rank():
        r = rank(eqs.coeffs, N)
        count = len(eqs)
        return (r == N - (2 * n - 2) and count == n + (n - 1) * (n - 2)), {"rank": r, "count": count}

    def delete_row():
        ranks = [rank(W[:i] + W[i + 1 :]) for i in range(2 * n)]
        aff = [_affine_rank(W[:i] + W[i + 1 :]) for i in range(2 * n)]
        return all(r == 2 * n - 1 for r in ranks) and all(a == 2 * n - 2 for a in aff), {
            "linear_ranks": sorted(set(ranks)),
            "affine_ranks": sorted(set(aff)),
        }

    def dimension():
        P = model.vpoly
        joint = rank(list(P.hull.equations.coeffs) + list(eqs.coeffs), N)
        return P.dim == 2 * n - 2 and joint == len(P.hull.equations), {"dim": P.dim}

    def tightness():
        counts = [sum(1 for w in W if w[i] == 0) for i in range(N)]
        return all(c == 2 * n - 2 for c in counts), {"tight_counts": sorted(set(counts))}

    def generic_facets():
        if n > caps.generic_max_n:
            raise CapacityError(f"generic facet enumeration capped at n <= {caps.generic_max_n}")
        fs = facets(model.vpoly, caps)
        closed = {frozenset(r for r, w in enumerate(W) if w[i] == 0): i for i in range(N)}
        by_incident = {f.incident: f for f in fs}
        match = set(by_incident) == set(closed)
        same = match and all(
            same_hyperplane(model.vpoly, [int(j == closed[inc]) for j in range(N)], 0, f.normal, f.rhs)
            for inc, f in by_incident.items()
        )
        sizes = sorted({len(f.incident) for f in fs})
        ok = len(fs) == N and match and same and sizes == [2 * n - 2]
        return ok, {"facets": len(fs), "incident_sizes": sizes, "matches_closed_form": match and same}

    rep.check("theorem1.equations_hold", anchor, equations_hold)
    rep.check("theorem1.equation_rank", anchor, equation_rank)
    rep.check("theorem1.delete_any_row", anchor, delete_row)
    rep.check("theorem1.dimension", anchor, dimension)
    rep.check("theorem1.facet_tightness", anchor, tightness)
    rep.check("theorem1.generic_facets", anchor, generic_facets)
    return rep


def free_sum_structure(n: int) -> Report:
    """The two n-vertex halves of W are (n-1)-simplices whose affine hulls
    meet exactly in the point with all coordinates 1/n."""
    rep = Report(f"qn n={n}")
    W = build_W(n)
    A, B = W[:n], W[n:]
    N = n * n
    anchor = "Q_n is a free sum of two (n-1)-simplices"

    def simplices():
        ra, rb = _affine_rank(A), _affine_rank(B)
        return ra == n - 1 and rb == n - 1, {"affine_ranks": [ra, rb]}

    def intersection():
        # sum l_i A_i - sum m_i B_i = 0, sum l = 1, sum m = 1
        rows = [[A[i][c] for i in range(n)] + [-B[i][c] for i in range(n)] for c in range(N)]
        rows.append([1] * n + [0] * n)
        rows.append([0] * n + [1] * n)
        rhs = [0] * N + [1, 1]
        sol = solve(rows, rhs, 2 * n)
        unique = sol is not None and rank(rows, 2 * n) == 2 * n
        if not unique:
            return False, {"unique": False}
        lam = sol[:n]
        point = [sum(l * a[c] for l, a in zip(lam, A)) for c in range(N)]
        centre = all(x == Fraction(1, n) for x in point)
        interior = all(x > 0 for x in sol)
        return centre and interior, {"unique": True, "point_is_all_1/n": centre, "relative_interior": interior}

    def complementary():
        da = [[a - b for a, b in zip(r, A[0])] for r in A[1:]]
        db = [[a - b for a, b in zip(r, B[0])] for r in B[1:]]
        total = rank(da + db, N)
        return total == 2 * n - 2, {"joint_direction_rank": total}

    rep.check("free_sum.simplices", anchor, simplices)
    rep.check("free_sum.intersection", anchor, intersection)
    rep.check("free_sum.dimension", anchor, complementary)
    return rep


def verify_odd_isomorphism(n: int) -> Report:
    rep = Report(f"dpn n={n}")
    anchor = "odd n: DP_n and Q_n agree up to a coordinate permutation"

    def check():
        bmap = odd_block_map(n)
        perm_ok = sorted(bmap) == list(range(n))
        image = permute_columns(build_V(n), odd_isomorphism(n))
        W = build_W(n)
        rows_equal = image == W
        as_sets = {tuple(r) for r in image} == {tuple(r) for r in W}
        raw = permute_columns(DPnModel(n).raw_vertices, main_coordinate_map(n))
        raw_ok = raw == build_V(n)
        return perm_ok and rows_equal and as_sets and raw_ok, {
            "block_map": bmap,
            "vertex_sets_equal": as_sets,
            "raw_to_main_form": raw_ok,
        }

    rep.check("odd.isomorphism", anchor, check)
    return rep


def verify_theorem2(n: int) -> Report:
    """Even n: DP_n is the join of two copies of Q_{n/2}, built through the
    explicit block reordering, projection and row/column sorting."""
    if n % 2 or n < 4:
        raise ValueError("verify_theorem2 needs even n >= 4")
    rep = Report(f"dpn n={n}")
    model = DPnModel(n)
    m = n // 2
    V = build_V(n)
    half = n * n // 2
    anchor = "even n: DP_n is a join of two copies of Q_{n/2}"
    reordered = permute_columns(V, model.even_column_map)
    projected = [r[:half] for r in reordered]
    row_order = even_row_order(n)
    sorted_rows = [projected[r] for r in row_order]
    blockdiag = permute_columns(sorted_rows, even_sorted_columns(n))
    Wt = build_W(m)

    def reorder():
        target = [[int(c % n == i) for c in range(n * n)] for i in range(n)]
        for i in range(n):
            row = []
            for p in range(n):
                e = (2 * p) % n
                row += [int(c == (i + e) % n) for c in range(n)]
            target.append(row)
        return reordered == target, {"block_order": even_block_order(n)}

    def projection():
        dup = all(r[:half] == r[half:] for r in reordered)
        distinct = len({tuple(r) for r in projected}) == 2 * n
        return dup and distinct, {"duplicated_halves": dup, "distinct_rows": distinct}

    def block_form():
        expected = _zero_pad_blocks(Wt, Wt)
        return blockdiag == expected, {"row_order": row_order}

    def skew():
        P1 = [r[: m * m] for r in blockdiag[:n]]
        P2 = [r[m * m :] for r in blockdiag[n:]]
        d1, d2 = _affine_rank(P1), _affine_rank(P2)
        joint = _affine_rank(blockdiag)
        # disjoint hulls: 0 lies outside aff(Q_{n/2})
        zero_outside = any(b != 0 for _, b in VPolytope(Wt).hull.equations)
        return joint == d1 + d2 + 1 and zero_outside, {
            "dims": [d1, d2],
            "joint_dim": joint,
            "zero_outside_hull": zero_outside,
        }

    def functional():
        vals = [sum(r[:m]) for r in blockdiag]
        first, second = set(vals[:n]), set(vals[n:])
        P = VPolytope(blockdiag)
        g = lattice_gcd([int(i < m) for i in range(half)], lattice_basis(P))
        return first == {1} and second == {0} and g == 1, {
            "values": [sorted(first), sorted(second)],
            "lattice_gcd": g,
        }

    def dimension():
        d = model.vpoly.dim
        return d == 2 * n - 3 == 2 * (2 * m - 2) + 1, {"dim": d}

    rep.check("theorem2.block_reorder", anchor, reorder)
    rep.check("theorem2.projection", anchor, projection)
    rep.check("theorem2.block_diagonal", anchor, block_form)
    rep.check("theorem2.skew_hulls", anchor, skew)
    rep.check("theorem2.separating_functional", anchor, functional)
    rep.check("theorem2.dimension", anchor, dimension)
    return rep


def verify_dpn_hdescription(n: int, caps: Caps = DEFAULT_CAPS) -> Report:
    """Closed-form H-description of DP_n against the generic one."""
    rep = Report(f"dpn n={n}")
    model = DPnModel(n)
    H = model.hpoly
    P = model.vpoly
    N = n * n
    anchor = "DP_n facets from the Q_n / join description"

    def hull():
        sat = all(H.satisfied_by(v) for v in P.vertices)
        r = rank(H.equations.coeffs, N)
        return sat and N - r == model.dim == P.dim, {"rank": r, "dim": P.dim}

    def facet_sets():
        if n > caps.generic_max_n:
            raise CapacityError(f"generic facet enumeration capped at n <= {caps.generic_max_n}")
        fs = facets(P, caps)
        closed = {
            frozenset(i for i, v in enumerate(P.vertices) if dot(a, v) == b) for a, b in H.inequalities
        }
        generic = {f.incident for f in fs}
        return closed == generic and len(closed) == len(H.inequalities), {
            "generic": len(generic),
            "closed_form": len(H.inequalities),
        }

    rep.check("dpn.hull", anchor, hull)
    rep.check("dpn.facets", anchor, facet_sets)
    return rep


@dataclass
class GorensteinCertificate:
    codegree: int
    center: tuple
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def gorenstein_certificate(model: QnModel, caps: Caps = DEFAULT_CAPS) -> GorensteinCertificate:
    """Certificate that ``n Q_n - (1,...,1)`` is reflexive in the lattice of its hull."""
    n = model.n
    if n > caps.qn_max:
        raise CapacityError(f"Gorenstein enumeration capped at n <= {caps.qn_max}")
    P = model.vpoly
    N = n * n
    m = tuple([1] * N)
    checks = {}
    checks["center_on_hull"] = all(dot(a, m) == n * b for a, b in P.hull.equations)
    checks["center_interior"] = all(x > 0 for x in m) and contains(P, [Fraction(1, n)] * N)
    pts = lattice_point_list(P, n, caps)
    interior = [p for p in pts if all(x > 0 for x in p)]
    checks["unique_interior_point"] = interior == [m]
    basis = lattice_basis(P)
    distances = []
    for f in facets(P, caps):
        g = lattice_gcd(f.normal, basis)
        distances.append(Fraction(dot(f.normal, m) - n * f.rhs, g))
    checks["facet_distance_one"] = bool(distances) and all(d == 1 for d in distances)
    closed = [Fraction(m[i], lattice_gcd([int(j == i) for j in range(N)], basis)) for i in range(N)]
    checks["coordinate_facets_distance_one"] = all(d == 1 for d in closed)
    return GorensteinCertificate(n, m, checks)


def verify_gorenstein(n: int, caps: Caps = DEFAULT_CAPS) -> Report:
    rep = Report(f"qn n={n}")

    def check():
        cert = gorenstein_certificate(QnModel(n), caps)
        return cert.ok, {"codegree": cert.codegree, **cert.checks}

    rep.check("gorenstein.reflexive_dilate", "Q_n is Gorenstein of codegree n", check)
    return rep


def compressed_check(P: VPolytope, inequalities: LinearSystem = None, caps: Caps = DEFAULT_CAPS) -> bool:
    """Every facet functional, made primitive on the lattice of aff(P),
    takes exactly two consecutive values on the vertices."""
    if inequalities is None:
        fs = facets(P, caps)
        inequalities = LinearSystem([f.normal for f in fs], [f.rhs for f in fs], ncols=P.ambient_dim)
    basis = lattice_basis(P)
    for a, _ in inequalities:
        g = lattice_gcd(a, basis)
        vals = [dot(a, v) for v in P.vertices]
        if Fraction(max(vals) - min(vals), g) != 1:
            return False
    return True


def verify_compressed(n: int) -> Report:
    rep = Report(f"qn n={n}")

    def check():
        model = QnModel(n)
        ok = compressed_check(model.vpoly, model.hpoly.inequalities)
        return ok, {"facets": len(model.hpoly.inequalities)}

    rep.check("compressed.facet_width_one", "Q_n is compressed", check)
    return rep


def doubly_stochastic_commutant(A) -> HPolytope:
    """``{M : M doubly stochastic, MA = AM}`` in row-major coordinates."""
    n = len(A)
    N = n * n
    rows, rhs = [], []
    for i in range(n):
        rows.append([int(j // n == i) for j in range(N)])
        rhs.append(1)
        rows.append([int(j % n == i) for j in range(N)])
        rhs.append(1)
    for i in range(n):
        for j in range(n):
            row = [0] * N
            for l in range(n):
                row[i * n + l] += A[l][j]
                row[l * n + j] -= A[i][l]
            if any(row):
                rows.append(row)
                rhs.append(0)
    return HPolytope(LinearSystem(rows, rhs, ncols=N), _coordinate_inequalities(N))


def cycle_adjacency(n: int) -> list[list[int]]:
    return [[int((i - j) % n in (1, n - 1)) for j in range(n)] for i in range(n)]


def verify_tinhofer(n: int, caps: Caps = DEFAULT_CAPS) -> Report:
    """Vertices of the doubly stochastic matrices commuting with the
    adjacency matrix of the n-cycle are exactly the 2n dihedral matrices."""
    rep = Report(f"tinhofer n={n}")

    def check():
        if n > caps.generic_max_n:
            raise CapacityError(f"vertex enumeration capped at n <= {caps.generic_max_n}")
        V = h_vertex_enumeration(doubly_stochastic_commutant(cycle_adjacency(n)), "dd", caps)
        expected = {tuple(r) for r in DihedralGroup(n).vertex_matrix()}
        return set(V.vertices) == expected, {"vertices": len(V), "expected": len(expected)}

    rep.check("tinhofer.cycle", "commuting doubly stochastic matrices of C_n", check)
    return rep

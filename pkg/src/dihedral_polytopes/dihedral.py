"""The dihedral group D_n acting on the points 0..n-1 of a regular n-gon.

Permutations act from the right: ``(i)(a*b) = ((i)a)b``, and the
permutation matrix of ``a`` has its 1 in row ``i`` at column ``a(i)``, so
``perm_matrix(a*b) == perm_matrix(a) @ perm_matrix(b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation of 0..{len(self.images) - 1}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]], one_based: bool = True) -> "Perm":
        """Build from cycle notation, e.g. ``[(2, 5), (3, 4)]`` for n=5."""
        images = list(range(n))
        shift = 1 if one_based else 0
        for cyc in cycles:
            cyc = [c - shift for c in cyc]
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return cls(images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        # self first, then other
        return Perm(other.images[i] for i in self.images)

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        out = Perm.identity(self.n)
        for _ in range(abs(k)):
            out = out * base
        return out

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i == j]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))


def perm_matrix(sigma: Perm) -> list[list[int]]:
    n = sigma.n
    return [[int(j == sigma(i)) for j in range(n)] for i in range(n)]


def shift_matrix_power(n: int, k: int) -> list[list[int]]:
    """``R^k``: ones at ``(i, i+k mod n)``; negative ``k`` allowed."""
    k %= n
    return [[int(j == (i + k) % n) for j in range(n)] for i in range(n)]


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def flatten(M) -> list[int]:
    """Read a square matrix row by row."""
    if any(len(row) != len(M) for row in M):
        raise ValueError("flatten expects a square matrix")
    return [x for row in M for x in row]


def _block_row(n: int, i: int, exponents: Sequence[int]) -> list[int]:
    """Row ``i`` of the block row ``[R^e0 R^e1 ...]``."""
    row = []
    for e in exponents:
        block = [0] * n
        block[(i + e) % n] = 1
        row.extend(block)
    return row


def build_W(n: int) -> list[list[int]]:
    """The 2n x n^2 matrix ``[I I ... I; I R ... R^(n-1)]``."""
    if n < 2:
        raise ValueError("build_W needs n >= 2")
    top = [_block_row(n, i, [0] * n) for i in range(n)]
    bottom = [_block_row(n, i, range(n)) for i in range(n)]
    return top + bottom


def build_V_raw(n: int) -> list[list[int]]:
    """Flattened matrices of D_n in group order:
    ``[R^0 R^1 ... R^(n-1); R^0 R^-1 ... R^-(n-1)]``."""
    if n < 3:
        raise ValueError("build_V needs n >= 3")
    return [flatten(perm_matrix(g)) for g in DihedralGroup(n).elements]


def main_coordinate_map(n: int) -> list[int]:
    """Coordinate permutation taking the raw vertex matrix to ``build_V``.

    Entry ``p = k*n + e`` of the result is the raw coordinate read into
    position ``p``: matrix entry ``(k, e + k mod n)``.
    """
    return [k * n + (e + k) % n for k in range(n) for e in range(n)]


def build_V(n: int) -> list[list[int]]:
    """Vertices of DP_n as ``[I I ... I; I R^-2 R^-4 ... R^-2(n-1)]``."""
    if n < 3:
        raise ValueError("build_V needs n >= 3")
    top = [_block_row(n, i, [0] * n) for i in range(n)]
    bottom = [_block_row(n, i, [-2 * k for k in range(n)]) for i in range(n)]
    return top + bottom


def permute_columns(rows, colmap: Sequence[int]) -> list[list[int]]:
    """``out[r][p] = rows[r][colmap[p]]``."""
    return [[row[c] for c in colmap] for row in rows]


class DihedralGroup:
    """D_n with elements ordered ``rho^0..rho^(n-1), tau, tau rho, ..., tau rho^(n-1)``.

    ``rho = (1,2,...,n)`` and ``tau = (2,n)(3,n-1)...`` in 1-based cycle
    notation; after re-indexing, ``tau`` is ``i -> -i mod n`` for both
    parities of n, fixing point 0 (and n/2 when n is even).
    """

    def __init__(self, n: int):
        if n < 3:
            raise ValueError("D_n needs n >= 3")
        self.n = n
        self.rho = Perm((i + 1) % n for i in range(n))
        self.tau = Perm((-i) % n for i in range(n))
        rots = [self.rho ** k for k in range(n)]
        self.elements: list[Perm] = rots + [self.tau * r for r in rots]
        self._index = {g.images: i for i, g in enumerate(self.elements)}
        if len(self._index) != 2 * n:
            raise AssertionError("dihedral elements are not distinct")

    def __repr__(self):
        return f"DihedralGroup({self.n})"

    def __eq__(self, other):
        return isinstance(other, DihedralGroup) and other.n == self.n

    def __hash__(self):
        return hash(("D", self.n))

    def __len__(self):
        return 2 * self.n

    def index(self, g: Perm) -> int:
        return self._index[g.images]

    @property
    def identity_index(self) -> int:
        return 0

    def is_reflection(self, i: int) -> bool:
        return i >= self.n

    def edge_reflections(self) -> list[int]:
        """Reflections without a fixed point (only exist for even n)."""
        return [i for i in range(self.n, 2 * self.n) if not self.elements[i].fixed_points()]

    def mul(self, i: int, j: int) -> int:
        return self.index(self.elements[i] * self.elements[j])

    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        members = {0}
        gens = list(gens)
        frontier = [0]
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    b = self.mul(a, g)
                    if b not in members:
                        members.add(b)
                        new.append(b)
            frontier = new
        return frozenset(members)

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        gens = tuple(gens)
        return Subgroup(self, self.closure(gens), gens)

    def whole(self) -> "Subgroup":
        return Subgroup(self, frozenset(range(2 * self.n)), (1, self.n))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, frozenset([0]), ())

    def vertex_matrix(self, members: Iterable[int] = None) -> list[list[int]]:
        idx = range(2 * self.n) if members is None else sorted(members)
        return [flatten(perm_matrix(self.elements[i])) for i in idx]


@dataclass(frozen=True)
class Subgroup:
    group: DihedralGroup = field(compare=False, repr=False)
    members: frozenset
    generators: tuple = field(default=(), compare=False)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, i):
        return i in self.members

    def is_closed(self) -> bool:
        G = self.group
        if 0 not in self.members:
            return False
        return all(G.mul(a, b) in self.members for a in self.members for b in self.members)

    def conjugate(self, g: int) -> "Subgroup":
        """``g^-1 H g``."""
        G = self.group
        gi = G.index(G.elements[g].inverse())
        members = frozenset(G.mul(G.mul(gi, h), g) for h in self.members)
        return Subgroup(G, members, tuple(G.mul(G.mul(gi, h), g) for h in self.generators))

    def sort_key(self):
        return (len(self.members), sorted(self.members))

    def describe(self) -> str:
        G = self.group
        names = []
        for i in sorted(self.members):
            if i < G.n:
                names.append("e" if i == 0 else f"r{i}")
            else:
                names.append("t" if i == G.n else f"tr{i - G.n}")
        return "{" + ",".join(names) + "}"


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def all_subgroups(G: DihedralGroup) -> list[Subgroup]:
    """Every subgroup of D_n: ``<rho^d>`` and ``<rho^d, tau rho^i>`` for
    ``d | n`` and ``0 <= i < d``, ordered by size then members."""
    n = G.n
    found = {}
    for d in divisors(n):
        H = G.subgroup([d % n])
        found.setdefault(H.members, H)
        for i in range(d):
            H = G.subgroup([d % n, n + i])
            found.setdefault(H.members, H)
    subs = sorted(found.values(), key=Subgroup.sort_key)
    for H in subs:
        if not H.is_closed():
            raise AssertionError(f"subgroup {H.describe()} is not closed")
    expected = len(divisors(n)) + sum(divisors(n))
    if len(subs) != expected:
        raise AssertionError(f"found {len(subs)} subgroups of D_{n}, expected {expected}")
    return subs


def orbit_partition(H: Subgroup) -> tuple[tuple[int, ...], ...]:
    n = H.group.n
    perms = [H.group.elements[i] for i in H.members]
    seen = set()
    orbits = []
    for start in range(n):
        if start in seen:
            continue
        orbit = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for g in perms:
                y = g(x)
                if y not in orbit:
                    orbit.add(y)
                    stack.append(y)
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    return tuple(sorted(orbits))


def partition_stabilizer(G: DihedralGroup, parts) -> Subgroup:
    """Elements mapping each block of ``parts`` onto itself."""
    blocks = [frozenset(p) for p in parts]
    covered = sorted(x for b in blocks for x in b)
    if covered != list(range(G.n)):
        raise ValueError(f"{parts} is not a partition of 0..{G.n - 1}")
    members = frozenset(
        i for i, g in enumerate(G.elements)
        if all(frozenset(g(x) for x in b) == b for b in blocks)
    )
    return Subgroup(G, members, ())


def subgroups_by_brute_force(G: DihedralGroup) -> list[frozenset]:
    """All subsets of D_n containing e and closed under multiplication.

    Exponential in 2n; only meant as an oracle for small n.
    """
    m = len(G)
    table = [[G.mul(a, b) for b in range(m)] for a in range(m)]
    out = []
    for bits in product((0, 1), repeat=m - 1):
        S = [0] + [i + 1 for i, b in enumerate(bits) if b]
        Sset = set(S)
        if all(table[a][b] in Sset for a in S for b in S):
            out.append(frozenset(S))
    return sorted(out, key=lambda s: (len(s), sorted(s)))

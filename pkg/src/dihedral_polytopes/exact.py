"""Exact rational linear algebra and phase-1 simplex feasibility.

Matrices are plain lists of rows.  Entries may be ``int`` or
``fractions.Fraction``; results are always exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

Vector = Sequence  # of int | Fraction
Matrix = Sequence[Sequence]


def _ncols(M: Matrix, ncols: Optional[int]) -> int:
    if ncols is not None:
        return ncols
    if not M:
        raise ValueError("ncols is required for a matrix with no rows")
    return len(M[0])


def integer_rows(M: Matrix) -> list[list[int]]:
    """Scale every row by the lcm of its denominators."""
    out = []
    for row in M:
        row = [Fraction(x) for x in row]
        d = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * d) for x in row])
    return out


def bareiss(M: Matrix, ncols: Optional[int] = None) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer (or rational) matrix.

    Returns ``(E, pivots)``.  Rational input is cleared row by row first,
    which does not change the row space.  Pivots are the first nonzero
    column, taking the smallest available row index.
    """
    ncols = _ncols(M, ncols)
    A = integer_rows(M)
    m = len(A)
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            a = A[i][c]
            A[i] = [(piv * A[i][j] - a * A[r][j]) // prev for j in range(ncols)]
        prev = piv
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: Matrix, ncols: Optional[int] = None) -> int:
    if not M:
        return 0
    return len(bareiss(M, ncols)[1])


def determinant(M: Matrix) -> Fraction:
    """Exact determinant of a square matrix (Bareiss, with row scaling undone)."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    scale = 1
    for row in M:
        scale *= lcm(*(Fraction(x).denominator for x in row))
    A = integer_rows(M)
    sign = 1
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[k][k] * A[i][j] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return Fraction(sign * A[n - 1][n - 1]) / scale


def rref(M: Matrix, ncols: Optional[int] = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.

    Zero rows are dropped.  Pivoting is deterministic: first nonzero
    column, smallest row index.
    """
    ncols = _ncols(M, ncols)
    A = [[Fraction(x) for x in row] for row in M]
    m = len(A)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace(M: Matrix, ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per non-pivot column."""
    ncols = _ncols(M, ncols)
    R, pivots = rref(M, ncols) if M else ([], [])
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(M: Matrix, b: Vector, ncols: Optional[int] = None) -> Optional[list[Fraction]]:
    """One exact solution of ``M x = b`` or ``None`` when inconsistent.

    Free variables are set to zero, so the result is the reduced-echelon
    particular solution.
    """
    ncols = _ncols(M, ncols)
    if len(b) != len(M):
        raise ValueError("right-hand side length does not match row count")
    aug = [list(row) + [rhs] for row, rhs in zip(M, b)]
    R, pivots = rref(aug, ncols + 1) if aug else ([], [])
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[ncols]
    return x


def matvec(M: Matrix, x: Vector) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in M]


def dot(u: Vector, v: Vector):
    return sum(a * b for a, b in zip(u, v))


def transpose(M: Matrix, ncols: Optional[int] = None) -> list[list]:
    ncols = _ncols(M, ncols)
    return [[row[j] for row in M] for j in range(ncols)]


def primitive_normal(v: Vector) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray,
    then flip so the first nonzero entry is positive."""
    ints = integer_rows([v])[0]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive normal")
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return ints


def primitive_ray(v: Vector) -> list[int]:
    """Like :func:`primitive_normal` but keeps the orientation of ``v``."""
    ints = integer_rows([v])[0]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    return [x // g for x in ints]


def integer_kernel_basis(M: Matrix, ncols: Optional[int] = None) -> list[list[int]]:
    """A basis of the lattice ``{x in Z^n : M x = 0}``.

    Column-style Hermite reduction: unimodular column operations bring
    ``M`` to ``[H | 0]`` while the same operations are applied to the
    identity; the columns of that transform beyond the rank span the
    integer kernel.
    """
    ncols = _ncols(M, ncols)
    A = integer_rows(M)
    m = len(A)
    # Work on columns: C[j] is column j of A, U[j] column j of the transform.
    C = [[A[i][j] for i in range(m)] for j in range(ncols)]
    U = [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    r = 0
    for i in range(m):
        if r == ncols:
            break
        while True:
            nz = [j for j in range(r, ncols) if C[j][i] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(C[j][i]), j))
            C[r], C[j0] = C[j0], C[r]
            U[r], U[j0] = U[j0], U[r]
            done = True
            for j in range(r + 1, ncols):
                if C[j][i] != 0:
                    q = C[j][i] // C[r][i]
                    C[j] = [a - q * b for a, b in zip(C[j], C[r])]
                    U[j] = [a - q * b for a, b in zip(U[j], U[r])]
                    if C[j][i] != 0:
                        done = False
            if done:
                r += 1
                break
    return [list(u) for u in U[r:]]


@dataclass(frozen=True)
class LinearSystem:
    """Rows ``coeffs[i] . x  (op)  rhs[i]``; the relation is fixed by context."""

    coeffs: tuple[tuple, ...]
    rhs: tuple

    def __init__(self, coeffs=(), rhs=(), ncols: Optional[int] = None):
        coeffs = tuple(tuple(row) for row in coeffs)
        rhs = tuple(rhs)
        if len(coeffs) != len(rhs):
            raise ValueError("coefficient rows and right-hand sides differ in count")
        widths = {len(row) for row in coeffs}
        if len(widths) > 1:
            raise ValueError("coefficient vectors must share one length")
        if ncols is None:
            ncols = widths.pop() if widths else 0
        elif widths and widths.pop() != ncols:
            raise ValueError("coefficient width does not match ncols")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "ncols", ncols)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(zip(self.coeffs, self.rhs))


class _Tableau:
    """Phase-1 tableau for ``A x = b, x >= 0`` with ``b >= 0``.

    One artificial variable per row; Bland's rule on both the entering
    and the leaving choice.
    """

    def __init__(self, A, b):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        m, n = self.m, self.n
        self.T = []
        for i in range(m):
            row = [Fraction(x) for x in A[i]]
            row += [Fraction(int(i == k)) for k in range(m)]
            row.append(Fraction(b[i]))
            self.T.append(row)
        self.basis = [n + i for i in range(m)]
        # reduced costs of the phase-1 objective (sum of artificials)
        self.cost = [-sum(self.T[i][j] for i in range(m)) for j in range(n)] + [Fraction(0)] * m
        self.value = sum(self.T[i][-1] for i in range(m))

    def pivot(self, r, c):
        T = self.T
        inv = 1 / T[r][c]
        T[r] = [x * inv for x in T[r]]
        pr = T[r]
        for i in range(self.m):
            f = T[i][c]
            if i != r and f != 0:
                T[i] = [x - f * y for x, y in zip(T[i], pr)]
        f = self.cost[c]
        if f != 0:
            self.cost = [x - f * y for x, y in zip(self.cost, pr[:-1])]
            self.value += f * pr[-1]
        self.basis[r] = c

    def run(self):
        width = self.n + self.m
        while True:
            c = next((j for j in range(width) if self.cost[j] < 0), None)
            if c is None:
                return
            best = None
            for i in range(self.m):
                a = self.T[i][c]
                if a > 0:
                    key = (self.T[i][-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            # phase-1 objective is bounded below by zero
            assert best is not None
            self.pivot(best[1], c)

    def solution(self):
        x = [Fraction(0)] * self.n
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.T[i][-1]
        return x


def _phase1(A, b) -> Optional[list[Fraction]]:
    """A nonnegative solution of ``A x = b`` or ``None``."""
    A = [list(row) for row in A]
    b = list(b)
    if not A:
        return []
    for i in range(len(A)):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    tab = _Tableau(A, b)
    tab.run()
    if tab.value != 0:
        return None
    return tab.solution()


def _free_system(eq_rows, eq_rhs, le_rows, le_rhs, nvars):
    """Standard form for free variables: x = p - q, one slack per inequality."""
    nle = len(le_rows)
    A, b = [], []
    for row, rhs in zip(eq_rows, eq_rhs):
        A.append(list(row) + [-x for x in row] + [0] * nle)
        b.append(rhs)
    for k, (row, rhs) in enumerate(zip(le_rows, le_rhs)):
        A.append(list(row) + [-x for x in row] + [int(k == t) for t in range(nle)])
        b.append(rhs)
    return A, b


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`lp_feasible`.

    ``witness`` is a point satisfying every constraint when feasible.
    Otherwise ``certificate = (y, z)`` with ``z >= 0``,
    ``E^T y + A^T z = 0`` and ``f.y + g.z = -1``.
    """

    feasible: bool
    witness: Optional[tuple] = None
    certificate: Optional[tuple] = None

    def __bool__(self):
        return self.feasible


def check_witness(eqs: LinearSystem, ineqs: LinearSystem, x) -> bool:
    return all(dot(a, x) == b for a, b in eqs) and all(dot(a, x) <= b for a, b in ineqs)


def check_certificate(eqs: LinearSystem, ineqs: LinearSystem, certificate) -> bool:
    y, z = certificate
    if len(y) != len(eqs) or len(z) != len(ineqs) or any(v < 0 for v in z):
        return False
    n = eqs.ncols or ineqs.ncols
    for j in range(n):
        s = sum(yi * row[j] for yi, row in zip(y, eqs.coeffs))
        s += sum(zi * row[j] for zi, row in zip(z, ineqs.coeffs))
        if s != 0:
            return False
    return dot(y, eqs.rhs) + dot(z, ineqs.rhs) == -1


def lp_feasible(eqs: LinearSystem, ineqs: LinearSystem) -> LPResult:
    """Decide ``{x : eqs hold, ineq rows satisfy coeffs.x <= rhs}`` exactly.

    Variables are free.  The answer carries a witness point or a Farkas
    certificate, and both are re-checked before returning.
    """
    n = eqs.ncols if len(eqs) else ineqs.ncols
    if len(eqs) and len(ineqs) and eqs.ncols != ineqs.ncols:
        raise ValueError("equation and inequality widths differ")
    A, b = _free_system(eqs.coeffs, eqs.rhs, ineqs.coeffs, ineqs.rhs, n)
    sol = _phase1(A, b) if A else [Fraction(0)] * (2 * n)
    if sol is not None:
        x = tuple(sol[j] - sol[n + j] for j in range(n))
        if not check_witness(eqs, ineqs, x):
            raise ArithmeticError("simplex witness failed exact re-check")
        return LPResult(True, witness=x)

    # Farkas alternative: y free, z >= 0, E^T y + A^T z = 0, f.y + g.z = -1.
    ne, ni = len(eqs), len(ineqs)
    Et = transpose(eqs.coeffs, n) if ne else [[] for _ in range(n)]
    At = transpose(ineqs.coeffs, n) if ni else [[] for _ in range(n)]
    A2 = [list(Et[j]) + [-v for v in Et[j]] + list(At[j]) for j in range(n)]
    A2.append(list(eqs.rhs) + [-v for v in eqs.rhs] + list(ineqs.rhs))
    b2 = [0] * n + [-1]
    sol2 = _phase1(A2, b2)
    if sol2 is None:
        raise ArithmeticError("neither a witness nor a Farkas certificate was found")
    y = tuple(sol2[i] - sol2[ne + i] for i in range(ne))
    z = tuple(sol2[2 * ne + i] for i in range(ni))
    if not check_certificate(eqs, ineqs, (y, z)):
        raise ArithmeticError("Farkas certificate failed exact re-check")
    return LPResult(False, certificate=(y, z))

from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dihedral_polytopes.exact import (
    LinearSystem,
    bareiss,
    check_certificate,
    check_witness,
    determinant,
    dot,
    integer_kernel_basis,
    lp_feasible,
    matvec,
    nullspace,
    primitive_normal,
    primitive_ray,
    rank,
    rref,
    solve,
    transpose,
)

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def leibniz(M):
    n = len(M)
    total = 0
    for p in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = (-1) ** inversions
        for i in range(n):
            term *= M[i][p[i]]
        total += term
    return total


def test_rank_of_known_matrices():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[0, 0, 0]]) == 0
    assert rank([], ncols=3) == 0
    assert rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3


def test_nullspace_of_small_qn_system():
    # 5 independent equations on 9 coordinates: kernel 4; homogenizing adds one
    from dihedral_polytopes.models import qn_equations

    eq = qn_equations(3)
    assert len(nullspace(eq.coeffs, 9)) == 4
    homog = [list(a) + [-b] for a, b in eq]
    assert len(nullspace(homog, 10)) == 5


def test_determinant_fraction_entries():
    M = [[Fraction(1, 2), 1], [3, Fraction(1, 3)]]
    assert determinant(M) == Fraction(1, 6) - 3


def test_rref_drops_zero_rows():
    R, piv = rref([[2, 4], [1, 2], [0, 0]])
    assert R == [[1, 2]]
    assert piv == [0]


def test_solve_inconsistent_returns_none():
    assert solve([[1, 1], [1, 1]], [0, 1]) is None


def test_primitive_normal_and_ray():
    assert primitive_normal([0, -4, 6]) == [0, 2, -3]
    assert primitive_normal([Fraction(1, 2), Fraction(1, 3)]) == [3, 2]
    assert primitive_ray([0, -4, 6]) == [0, -2, 3]
    with pytest.raises(ValueError):
        primitive_normal([0, 0])


def test_integer_kernel_spans_lattice():
    # x + y + z = 0 has lattice basis of determinant 1 in the plane
    K = integer_kernel_basis([[1, 1, 1]], 3)
    assert len(K) == 2
    assert all(sum(v) == 0 for v in K)
    minors = [K[0][i] * K[1][j] - K[0][j] * K[1][i] for i in range(3) for j in range(i + 1, 3)]
    assert np.gcd.reduce([abs(m) for m in minors]) == 1


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_transpose_and_float_oracle(M):
    r = rank(M)
    assert r == rank(transpose(M))
    assert r == np.linalg.matrix_rank(np.array(M, dtype=float))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_leibniz(M):
    assert determinant(M) == leibniz(M)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_solve_and_nullspace(M, data):
    ncols = len(M[0])
    x0 = data.draw(st.lists(small, min_size=ncols, max_size=ncols))
    b = matvec(M, x0)
    x = solve(M, b)
    assert x is not None and matvec(M, x) == b
    N = nullspace(M)
    assert len(N) == ncols - rank(M)
    assert all(all(v == 0 for v in matvec(M, z)) for z in N)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_bareiss_is_integral_echelon(M):
    E, piv = bareiss(M)
    assert len(piv) == rank(M)
    assert all(isinstance(x, int) for row in E for x in row)
    assert piv == sorted(piv)


@settings(max_examples=100, deadline=None)
@given(st.lists(small, min_size=1, max_size=6).filter(any), st.integers(1, 5))
def test_primitive_normal_is_scale_invariant(v, s):
    p = primitive_normal(v)
    assert primitive_normal([s * x for x in v]) == p
    assert np.gcd.reduce([abs(x) for x in p]) == 1


@settings(max_examples=150, deadline=None)
@given(matrices(4, 3), matrices(4, 3), st.data())
def test_lp_answer_always_checks(A, B, data):
    n = 3
    A = [row[:n] + [0] * (n - len(row)) for row in A]
    B = [row[:n] + [0] * (n - len(row)) for row in B]
    eq_rhs = data.draw(st.lists(small, min_size=len(A), max_size=len(A)))
    le_rhs = data.draw(st.lists(small, min_size=len(B), max_size=len(B)))
    eqs, ineqs = LinearSystem(A, eq_rhs, n), LinearSystem(B, le_rhs, n)
    res = lp_feasible(eqs, ineqs)
    if res.feasible:
        assert check_witness(eqs, ineqs, res.witness)
    else:
        assert check_certificate(eqs, ineqs, res.certificate)


def test_lp_infeasible_box():
    # x <= 0 and -x <= -1
    eqs = LinearSystem([], [], 1)
    ineqs = LinearSystem([[1], [-1]], [0, -1], 1)
    res = lp_feasible(eqs, ineqs)
    assert not res
    y, z = res.certificate
    assert dot(z, [0, -1]) < 0


def test_lp_feasible_point():
    eqs = LinearSystem([[1, 1]], [1], 2)
    ineqs = LinearSystem([[-1, 0], [0, -1]], [0, 0], 2)
    res = lp_feasible(eqs, ineqs)
    assert res and check_witness(eqs, ineqs, res.witness)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dihedral_polytopes.config import CapacityError, Caps
from dihedral_polytopes.ehrhart import (
    HStarError,
    StrategyMismatch,
    counts_from_hstar,
    ehrhart_counts,
    ehrhart_data,
    hstar_from_counts,
    is_unimodal,
    normalized_volume,
    poly_mul,
    verify_corollary,
    verify_theorem3,
)
from dihedral_polytopes.models import DPnModel, QnModel
from dihedral_polytopes.polytope import VPolytope


def test_unit_square():
    counts = [(k + 1) ** 2 for k in range(5)]
    assert hstar_from_counts(counts, 2) == [1, 1, 0]


def test_q3_counts_from_generating_function():
    # (1 + t + t^2) / (1 - t)^5
    assert ehrhart_counts(QnModel(3), 6) == [1, 6, 21, 55, 120, 231, 406]


def test_dp4_counts():
    data = ehrhart_data(DPnModel(4))
    assert data.counts[:5] == [1, 8, 34, 104, 259]
    assert data.hstar[:3] == [1, 2, 1]


def test_bad_counts_rejected():
    with pytest.raises(HStarError):
        hstar_from_counts([1, 3], 2)
    with pytest.raises(HStarError):
        hstar_from_counts([2, 4, 9], 2)
    # not a quadratic: the extra count breaks the round trip
    with pytest.raises(HStarError):
        hstar_from_counts([1, 4, 9, 17], 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 6).flatmap(lambda d: st.tuples(st.just(d), st.lists(st.integers(0, 5), min_size=d, max_size=d))))
def test_hstar_round_trip(case):
    d, tail = case
    h = [1] + tail
    counts = [counts_from_hstar(h, d, k) for k in range(d + 3)]
    assert hstar_from_counts(counts, d) == h


def test_strategy_mismatch_detected():
    class Broken(QnModel):
        def structured_count(self, k):
            return super().structured_count(k) + (k == 2)

    with pytest.raises(StrategyMismatch):
        ehrhart_counts(Broken(2), 3)


def test_capacity_error():
    with pytest.raises(CapacityError):
        ehrhart_counts(QnModel(4), 2, caps=Caps(qn_max=3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_theorem3(n):
    rep = verify_theorem3(n)
    assert rep.passed, rep.failure_summary()


def test_theorem3_skips_all_claims_over_cap():
    rep = verify_theorem3(4, Caps(qn_max=3))
    assert [c.status for c in rep.claims] == ["skipped"] * 4


def test_corollary_n4():
    rep = verify_corollary(4)
    assert rep.passed, rep.failure_summary()


def test_corollary_rejects_odd():
    with pytest.raises(ValueError):
        verify_corollary(5)


@pytest.mark.parametrize(
    "P,vol",
    [
        (VPolytope([[0, 0], [1, 0], [0, 1]]), 1),
        (VPolytope([[0, 0], [2, 0], [0, 2]]), 4),
        (QnModel(2).vpoly, 2),
        (QnModel(3).vpoly, 3),
        (DPnModel(4).vpoly, 4),
    ],
)
def test_normalized_volume_two_ways(P, vol):
    assert normalized_volume(P, "ehrhart") == vol
    assert normalized_volume(P, "triangulation") == vol


def test_volume_uses_affine_lattice():
    # diagonal segment has Euclidean length 2*sqrt(2) but lattice length 2
    assert normalized_volume(VPolytope([[0, 0], [2, 2]]), "triangulation") == Fraction(2)


def test_helpers():
    assert poly_mul([1, 1], [1, 1]) == [1, 2, 1]
    assert is_unimodal([1, 2, 2, 1])
    assert not is_unimodal([1, 0, 1])
    assert is_unimodal([1, 1, 1, 0, 0])

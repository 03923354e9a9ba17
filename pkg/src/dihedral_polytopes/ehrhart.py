"""Ehrhart counts, h*-vectors and normalized volumes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Union

from .config import Caps, CapacityError
from .exact import determinant
from .models import DPnModel, QnModel
from .polytope import DEFAULT_CAPS, VPolytope, facets, lattice_basis, lattice_coordinates, lattice_points
from .report import Report

Model = Union[QnModel, DPnModel]


class StrategyMismatch(AssertionError):
    """The generic and structured lattice counts disagree."""


class HStarError(ValueError):
    """Counts do not come from a lattice polytope of the stated dimension."""


def ehrhart_counts(P: Union[VPolytope, Model], kmax: int, strategy: str = "both", caps: Caps = DEFAULT_CAPS) -> list[int]:
    """``L(0), ..., L(kmax)``.

    ``strategy`` is ``"generic"``, ``"structured"`` (models only) or
    ``"both"``, which runs both and raises :class:`StrategyMismatch` on
    any disagreement.
    """
    model = None if isinstance(P, VPolytope) else P
    if model is not None:
        if model.n > model.ehrhart_cap(caps):
            raise CapacityError(
                f"{model.name} n={model.n} exceeds the Ehrhart cap n <= {model.ehrhart_cap(caps)}"
            )
        P = model.vpoly
    if strategy not in ("generic", "structured", "both"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if model is None and strategy != "generic":
        strategy = "generic"
    counts = []
    for k in range(kmax + 1):
        generic = lattice_points(P, k, caps) if strategy in ("generic", "both") else None
        structured = model.structured_count(k) if strategy in ("structured", "both") else None
        if generic is not None and structured is not None and generic != structured:
            raise StrategyMismatch(f"k={k}: generic {generic} != structured {structured}")
        counts.append(generic if generic is not None else structured)
    return counts


def hstar_from_counts(counts, dim: int) -> list[int]:
    """``h*_j = sum_i (-1)^(j-i) C(dim+1, j-i) L(i)`` for ``j <= dim``.

    Every supplied count is then re-expanded from h*; a mismatch means the
    counts are not a degree-``dim`` Ehrhart polynomial.
    """
    if len(counts) < dim + 1:
        raise HStarError(f"need at least {dim + 1} counts, got {len(counts)}")
    if counts[0] != 1:
        raise HStarError("L(0) must be 1")
    h = [sum((-1) ** (j - i) * comb(dim + 1, j - i) * counts[i] for i in range(j + 1)) for j in range(dim + 1)]
    if any(x < 0 for x in h):
        raise HStarError(f"negative h* coefficient in {h}")
    for k, L in enumerate(counts):
        if counts_from_hstar(h, dim, k) != L:
            raise HStarError(f"L({k}) = {L} is not reproduced by h* = {h}")
    return h


def counts_from_hstar(h, dim: int, k: int) -> int:
    return sum(hj * comb(k + dim - j, dim) for j, hj in enumerate(h) if k + dim - j >= 0)


def trim(h) -> list[int]:
    h = list(h)
    while len(h) > 1 and h[-1] == 0:
        h.pop()
    return h


def poly_mul(a, b) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def is_unimodal(h) -> bool:
    h = trim(h)
    i = 0
    while i + 1 < len(h) and h[i] <= h[i + 1]:
        i += 1
    while i + 1 < len(h) and h[i] >= h[i + 1]:
        i += 1
    return i == len(h) - 1


@dataclass
class EhrhartData:
    dim: int
    counts: list[int]
    hstar: list[int]

    @property
    def degree(self) -> int:
        return len(trim(self.hstar)) - 1

    @property
    def codegree(self) -> int:
        return self.dim + 1 - self.degree

    @property
    def normalized_volume(self) -> int:
        return sum(self.hstar)

    @property
    def symmetric(self) -> bool:
        h = trim(self.hstar)
        return h == h[::-1]


def ehrhart_data(P: Union[VPolytope, Model], kmax: int = None, strategy: str = "both", caps: Caps = DEFAULT_CAPS) -> EhrhartData:
    dim = P.dim if isinstance(P, VPolytope) else P.vpoly.dim
    kmax = dim + 2 if kmax is None else kmax
    counts = ehrhart_counts(P, max(kmax, dim), strategy, caps)
    return EhrhartData(dim, counts[: max(kmax, dim) + 1], hstar_from_counts(counts, dim))


def _pulling_simplices(P: VPolytope, idx: list[int], caps: Caps) -> list[list[int]]:
    """Pulling triangulation of conv(vertices[idx]) from its first vertex."""
    sub = VPolytope([P.vertices[i] for i in idx], P.ambient_dim)
    if sub.dim == 0:
        return [[idx[0]]]
    if len(idx) == sub.dim + 1:
        return [list(idx)]
    apex = idx[0]
    out = []
    for f in facets(sub, caps):
        if 0 in f.incident:
            continue
        face = [idx[i] for i in sorted(f.incident)]
        for s in _pulling_simplices(P, face, caps):
            out.append([apex] + s)
    return out


def normalized_volume(P: VPolytope, method: str = "ehrhart", caps: Caps = DEFAULT_CAPS) -> Fraction:
    """Volume in units of unimodular simplices of the lattice ``Z^d ∩ aff(P)``.

    ``"ehrhart"`` sums the h*-vector; ``"triangulation"`` adds lattice
    determinants over a pulling triangulation (small cases only).
    """
    if method == "ehrhart":
        return Fraction(sum(ehrhart_data(P, P.dim, "generic", caps).hstar))
    if method != "triangulation":
        raise ValueError(f"unknown method {method!r}")
    d = P.dim
    if d == 0:
        return Fraction(1)
    basis = lattice_basis(P)
    coords = [lattice_coordinates(P, v, basis) for v in P.vertices]
    total = Fraction(0)
    for simplex in _pulling_simplices(P, list(range(len(P.vertices))), caps):
        z0 = coords[simplex[0]]
        M = [[a - b for a, b in zip(coords[i], z0)] for i in simplex[1:]]
        total += abs(determinant(M))
    return total


def _volume_by_leading_coefficient(counts, dim) -> int:
    # the dim-th finite difference of L is dim! times its leading coefficient
    return sum((-1) ** (dim - i) * comb(dim, i) * counts[i] for i in range(dim + 1))


def verify_theorem3(n: int, caps: Caps = DEFAULT_CAPS) -> Report:
    """h*(Q_n) is n ones, from brute-force lattice counting."""
    rep = Report(f"qn n={n}")
    anchor = "h*(Q_n) = (1, ..., 1) of length n"
    state = {}

    def hstar():
        model = QnModel(n)
        data = ehrhart_data(model, model.dim + 2, "both", caps)
        state["data"] = data
        expected = [1] * n + [0] * (data.dim + 1 - n)
        return data.hstar == expected and data.dim == 2 * n - 2, {
            "hstar": trim(data.hstar),
            "counts": data.counts,
            "dim": data.dim,
        }

    def shape():
        data = _need(state)
        return data.symmetric and is_unimodal(data.hstar), {"symmetric": data.symmetric, "unimodal": is_unimodal(data.hstar)}

    def codegree():
        data = _need(state)
        return data.codegree == n, {"codegree": data.codegree}

    def volume():
        data = _need(state)
        lead = _volume_by_leading_coefficient(data.counts, data.dim)
        return data.normalized_volume == n == lead, {"normalized_volume": data.normalized_volume}

    rep.check("theorem3.hstar", anchor, hstar)
    rep.check("theorem3.symmetric_unimodal", anchor, shape)
    rep.check("theorem3.codegree", anchor, codegree)
    rep.check("theorem3.volume", anchor, volume)
    return rep


def _need(state):
    if "data" not in state:
        raise CapacityError("h* unavailable (previous claim skipped)")
    return state["data"]


def verify_corollary(n: int, caps: Caps = DEFAULT_CAPS) -> Report:
    """Even n: h*(DP_n) = (1, 2, ..., n/2, ..., 2, 1) = h*(Q_{n/2})^2."""
    if n % 2 or n < 4:
        raise ValueError("verify_corollary needs even n >= 4")
    rep = Report(f"dpn n={n}")
    m = n // 2
    anchor = "even n: h*(DP_n) is the square of h*(Q_{n/2})"
    state = {}

    def hstar():
        model = DPnModel(n)
        data = ehrhart_data(model, model.dim + 2, "both", caps)
        state["data"] = data
        expected = list(range(1, m + 1)) + list(range(m - 1, 0, -1))
        return trim(data.hstar) == expected, {"hstar": trim(data.hstar), "counts": data.counts}

    def product():
        data = _need(state)
        q = ehrhart_data(QnModel(m), None, "both", caps)
        sq = poly_mul(trim(q.hstar), trim(q.hstar))
        return trim(data.hstar) == sq, {"q_hstar": trim(q.hstar), "square": sq}

    def volume():
        data = _need(state)
        return data.normalized_volume * 4 == n * n, {"normalized_volume": data.normalized_volume}

    def gorenstein():
        data = _need(state)
        return data.symmetric and data.codegree == n, {"symmetric": data.symmetric, "codegree": data.codegree}

    rep.check("corollary.hstar", anchor, hstar)
    rep.check("corollary.product", anchor, product)
    rep.check("corollary.volume", anchor, volume)
    rep.check("corollary.gorenstein", anchor, gorenstein)
    return rep

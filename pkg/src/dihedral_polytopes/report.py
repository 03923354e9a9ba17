"""Verification reports: one named claim per checked statement."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .config import CapacityError

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Claim:
    id: str
    anchor: str
    status: str
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def as_dict(self, timing: bool = False) -> dict:
        out = {"claim": self.id, "anchor": self.anchor, "status": self.status, "details": self.details}
        if timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


@dataclass
class Report:
    target: str
    claims: list[Claim] = field(default_factory=list)

    def check(self, claim_id: str, anchor: str, fn: Callable[[], tuple[bool, dict]]) -> Claim:
        """Run ``fn`` and record its verdict.  A :class:`CapacityError`
        becomes a skip carrying the reason."""
        t0 = time.perf_counter()
        try:
            ok, details = fn()
            status = PASS if ok else FAIL
        except CapacityError as exc:
            status, details = SKIPPED, {"reason": str(exc)}
        claim = Claim(claim_id, anchor, status, _jsonable(details), time.perf_counter() - t0)
        self.claims.append(claim)
        return claim

    def extend(self, other: "Report") -> "Report":
        self.claims.extend(other.claims)
        return self

    @property
    def passed(self) -> bool:
        return all(c.status == PASS for c in self.claims)

    @property
    def failed(self) -> list[Claim]:
        return [c for c in self.claims if c.status == FAIL]

    @property
    def skipped(self) -> list[Claim]:
        return [c for c in self.claims if c.status == SKIPPED]

    def __getitem__(self, claim_id: str) -> Claim:
        for c in self.claims:
            if c.id == claim_id:
                return c
        raise KeyError(claim_id)

    def failure_summary(self) -> str:
        return "; ".join(f"{c.id}: {c.details}" for c in self.failed)


def _jsonable(obj):
    from fractions import Fraction

    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj

"""Capacity limits for the exponential enumeration paths.

``DIHEDRAL_CAP_N`` overrides every ``n`` cap with one integer.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_VAR = "DIHEDRAL_CAP_N"


class CapacityError(RuntimeError):
    """An instance exceeds a configured enumeration cap."""


@dataclass(frozen=True)
class Caps:
    # largest n for which Ehrhart counts are enumerated
    qn_max: int = 5
    dpn_even_max: int = 6
    dpn_odd_max: int = 5
    # largest n for generic facet / vertex enumeration
    generic_max_n: int = 6
    # candidate-subset budgets for the exhaustive enumerators
    max_subsets: int = 200_000
    max_lattice_nodes: int = 50_000_000

    def ehrhart_max(self, model: str, n: int) -> int:
        if model == "qn":
            return self.qn_max
        return self.dpn_even_max if n % 2 == 0 else self.dpn_odd_max


def caps_from_env(environ=None) -> Caps:
    environ = os.environ if environ is None else environ
    caps = Caps()
    raw = environ.get(ENV_VAR)
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
        caps = replace(caps, qn_max=n, dpn_even_max=n, dpn_odd_max=n, generic_max_n=max(n, 3))
    return caps

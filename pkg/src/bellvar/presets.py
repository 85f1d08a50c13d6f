"""Named configurations that saturate their family's quantum bound.

* ``chsh-optimal``: diagonal A settings, z/x B settings on the Bell
  state; value 2 sqrt(2), zero slack, all saturation conditions hold.
* ``chained-n``: the planar settings of ``chained_optimal_settings`` on
  the Bell state; value ``2n cos(pi / 2n)``.
* ``mk-ghz``: x/y settings on every site with the (phase-fixed) top
  eigenvector of the MK operator, a GHZ-class state; value
  ``2**(3(n-1)/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, top_eigenpair
from .optimize import chained_optimal_settings
from .scenarios import (
    FamilySpec,
    Scenario,
    bell_state,
    chained_family,
    chsh_family,
    from_bloch_table,
    mk_family,
    mk_operators,
)

__all__ = ["PRESET_NAMES", "Preset", "preset"]

PRESET_NAMES = ("chsh-optimal", "chained-n", "mk-ghz")


@dataclass(frozen=True)
class Preset:
    name: str
    family: FamilySpec
    scenario: Scenario
    state: np.ndarray


def preset(name: str, n: int | None = None) -> Preset:
    """Build a named preset; ``n`` parameterizes chained-n and mk-ghz."""
    if name == "chsh-optimal":
        if n not in (None, 2):
            raise ValueError("chsh-optimal takes no size parameter")
        inv = 1.0 / np.sqrt(2.0)
        scenario = from_bloch_table(
            [
                [[inv, 0.0, inv], [-inv, 0.0, inv]],
                [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
            ]
        )
        return Preset(name=name, family=chsh_family(), scenario=scenario, state=bell_state())
    if name == "chained-n":
        size = 3 if n is None else n
        return Preset(
            name=name,
            family=chained_family(size),
            scenario=chained_optimal_settings(size),
            state=bell_state(),
        )
    if name == "mk-ghz":
        size = 3 if n is None else n
        family = mk_family(size)
        pairs = [(SIGMA_X, SIGMA_Y)] * size
        scenario = Scenario(observables=tuple((p[0], p[1]) for p in pairs))
        _, state = top_eigenpair(mk_operators(size, pairs).b)
        return Preset(name=name, family=family, scenario=scenario, state=state)
    raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .formulas.evaluate import DEFAULT_BUDGET
from .groups import DEFAULT_GROUP_CAP
from .structured import DEFAULT_AUT_CAP


@dataclass(frozen=True)
class Bounds:
    max_atoms: int = 3
    aut_cap: int = DEFAULT_AUT_CAP  # largest domain for automorphism search
    group_cap: int = DEFAULT_GROUP_CAP  # largest group order compared
    rank_cap: int = 4  # default level cap for uexists written without one
    budget: int = DEFAULT_BUDGET

    def with_(self, **kw) -> "Bounds":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    transfer_cases: int = 1000
    lift_cases: int = 500
    bounds: Bounds = field(default_factory=Bounds)

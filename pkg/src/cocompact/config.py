"""Budgets and run configuration."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

DEFAULT_BREAKPOINT_BUDGET = 200_000
# complements of the two members of the default co-compact cover
DEFAULT_COVER = (((-1, 1),), ((2, 4),))
BUDGET_ENV = "COCOMPACT_BUDGET"


def breakpoint_budget(override: Optional[int] = None) -> int:
    """Cap on breakpoints of any composed map; ``COCOMPACT_BUDGET`` overrides the default."""
    if override is not None:
        return override
    env = os.environ.get(BUDGET_ENV)
    if env:
        value = int(env)
        if value <= 0:
            raise ValueError(f"{BUDGET_ENV} must be positive, got {value}")
        return value
    return DEFAULT_BREAKPOINT_BUDGET


@dataclass(frozen=True)
class CoverBudget:
    # members of a (dominance-reduced) cover handed to the exact subcover search
    max_members: int = 24
    # raw pairwise products formed by a single join
    max_join_elements: int = 100_000
    # branch-and-bound nodes per minimal subcover search
    max_nodes: int = 2_000_000


@dataclass
class RunConfig:
    map_source: str = "corpus:doubling"
    m: int = 1
    n_max: int = 8
    lap_n_max: int = 10
    eps: tuple[float, ...] = (0.25,)
    metrics: tuple[str, ...] = ("euclid", "circle")
    windows: tuple[tuple[float, float], ...] = ((0.0, 1.0),)
    grid_step: float = 1.0 / 16384
    bowen_n_max: int = 24
    horseshoe_n_max: int = 4
    cover_source: Optional[str] = None  # cover-spec path; None uses DEFAULT_COVER
    cover_n_max: int = 6
    tolerance: float = 0.05  # slack for the cross-method consistency checks
    log_base: str = "e"
    budget: Optional[int] = None
    cover_budget: CoverBudget = field(default_factory=CoverBudget)
    seed: int = 0

    def __post_init__(self) -> None:
        if any(e <= 0 for e in self.eps):
            raise ValueError("eps values must be positive")
        if list(self.eps) != sorted(self.eps, reverse=True):
            raise ValueError("eps values must be sorted descending")
        if self.budget is not None and self.budget <= 0:
            raise ValueError("budget must be positive")
        for name in ("m", "n_max", "lap_n_max", "bowen_n_max", "horseshoe_n_max", "cover_n_max"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.grid_step <= 0:
            raise ValueError("grid_step must be positive")
        if self.log_base not in ("e", "2", "10"):
            raise ValueError(f"unsupported log base {self.log_base!r}")

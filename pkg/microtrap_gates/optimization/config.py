"""
Optimizer configuration.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

from ..errors import DomainError
from ..gates.engine import RateConvention

DEFAULT_STEP_SCHEDULE = (16, 8, 4, 2, 1)


class StopReason(Enum):
    """Why a search ended."""
    TARGET_REACHED = "target_reached"
    BUDGET_EXHAUSTED = "budget_exhausted"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class OptimizerConfig:
    """
    Search settings for anti-symmetric kick-count vectors.

    Only the group_count/2 positive-time counts are free; the negative-time
    half is their mirror image, so every candidate is anti-symmetric.
    """
    gate_time_T_G: float                         # trap periods
    z_bound: int = 100
    group_count: int = 16
    restarts: int = 64
    rng_seed: int = 0
    target_infidelity: float = 1e-9
    batch_size: int = 8                          # restarts between target checks
    max_workers: int = 4
    exhaustive_limit: int = 200_000
    step_schedule: Tuple[int, ...] = field(default=DEFAULT_STEP_SCHEDULE)
    max_descent_iterations: int = 20_000
    rate_convention: RateConvention = RateConvention.HALF_GROUP

    def __post_init__(self):
        if not (math.isfinite(self.gate_time_T_G) and self.gate_time_T_G > 0):
            raise DomainError(f"gate time must be positive, got {self.gate_time_T_G}")
        if self.group_count < 2 or self.group_count % 2:
            raise DomainError(f"group_count must be a positive even integer, got {self.group_count}")
        if self.z_bound < 1:
            raise DomainError(f"z_bound must be >= 1, got {self.z_bound}")
        if self.restarts < 1:
            raise DomainError(f"restarts must be >= 1, got {self.restarts}")
        if self.batch_size < 1 or self.max_workers < 1:
            raise DomainError("batch_size and max_workers must be >= 1")
        if not self.step_schedule or any(s < 1 for s in self.step_schedule):
            raise DomainError(f"step schedule must contain positive steps, got {self.step_schedule}")
        if self.target_infidelity < 0:
            raise DomainError("target infidelity must be non-negative")

    @property
    def free_counts(self) -> int:
        return self.group_count // 2

    @property
    def search_space_size(self) -> int:
        return (2 * self.z_bound + 1) ** self.free_counts

    @property
    def is_exhaustive(self) -> bool:
        return self.search_space_size <= self.exhaustive_limit

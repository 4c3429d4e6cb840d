"""
Pulse-sequence optimization and sweeps.
"""

from .config import OptimizerConfig, StopReason
from .parallel_executor import RestartExecutor, TaskResult, create_executor
from .search import (
    ApgCostModel,
    OptResult,
    brute_force_optimum,
    descend,
    exhaustive_search,
    optimize_apg,
    print_opt_summary,
    rank_key,
)
from .sweeps import (
    DIAGONAL_CSV_HEADER,
    SWEEP_CSV_HEADER,
    CharacteristicCurve,
    DiagonalComparison,
    PowerLawFit,
    SweepPoint,
    characteristic_curve,
    compare_diagonal_to_nn,
    fit_power_law,
    min_rate_for_fidelity,
    print_sweep_summary,
    rate_law_from_sweep,
    sweep_rep_rate,
)

__all__ = [
    "ApgCostModel",
    "CharacteristicCurve",
    "DIAGONAL_CSV_HEADER",
    "DiagonalComparison",
    "OptResult",
    "OptimizerConfig",
    "PowerLawFit",
    "RestartExecutor",
    "SWEEP_CSV_HEADER",
    "StopReason",
    "SweepPoint",
    "TaskResult",
    "brute_force_optimum",
    "characteristic_curve",
    "compare_diagonal_to_nn",
    "create_executor",
    "descend",
    "exhaustive_search",
    "fit_power_law",
    "min_rate_for_fidelity",
    "optimize_apg",
    "print_opt_summary",
    "print_sweep_summary",
    "rank_key",
    "rate_law_from_sweep",
    "sweep_rep_rate",
]

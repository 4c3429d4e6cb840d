"""
Fast gate evaluation.

- sequence: PulseSequence, APG builder, JSON fixtures
- engine: GateContext, GateMetrics, delta_alpha, delta_phi, infidelity, f_min
- trajectory: per-branch phase-space trajectories
- composition: gate chains and pulse-error degradation
"""

from .composition import ChainResult, compose_chain, effective_fidelity, swap_equivalent_chain
from .engine import (
    GateContext,
    GateMetrics,
    PhaseConvention,
    RateConvention,
    accumulated_phase,
    calibrate_context,
    delta_alpha,
    delta_phi,
    infidelity,
    infidelity_terms,
    min_rep_rate,
    phase_matched_wavevector,
    print_metrics_summary,
    rate_convention_gap,
    resolving_rate,
)
from .sequence import (
    FIXTURE_SEQUENCES,
    PulseSequence,
    TimeUnit,
    load_fixture_sequence,
    load_sequence,
    resolve_sequence,
)
from .trajectory import (
    TRAJECTORY_CSV_HEADER,
    Branch,
    TrajectoryResult,
    branch_phase_difference,
    trajectory,
    trajectory_table,
)

__all__ = [
    "Branch",
    "ChainResult",
    "FIXTURE_SEQUENCES",
    "GateContext",
    "GateMetrics",
    "PhaseConvention",
    "PulseSequence",
    "RateConvention",
    "TRAJECTORY_CSV_HEADER",
    "TimeUnit",
    "TrajectoryResult",
    "accumulated_phase",
    "branch_phase_difference",
    "calibrate_context",
    "compose_chain",
    "delta_alpha",
    "delta_phi",
    "effective_fidelity",
    "infidelity",
    "infidelity_terms",
    "load_fixture_sequence",
    "load_sequence",
    "min_rep_rate",
    "phase_matched_wavevector",
    "print_metrics_summary",
    "rate_convention_gap",
    "resolve_sequence",
    "resolving_rate",
    "swap_equivalent_chain",
    "trajectory",
    "trajectory_table",
]

"""
Gate chains and pulse-error degradation.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from ..errors import DomainError
from .engine import GateMetrics

SWAP_GATE_COUNT = 3


@dataclass(frozen=True)
class ChainResult:
    """Product fidelity and summed cost of a sequence of gates."""
    fidelity: float
    total_time: float
    total_pulses: int
    n_gates: int

    @property
    def infidelity(self) -> float:
        return 1.0 - self.fidelity


def compose_chain(gates: Sequence[Tuple[GateMetrics, float]]) -> ChainResult:
    """
    Multiply fidelities and add durations and pulse counts.

    Args:
        gates: (metrics, duration) for each gate in order

    Returns:
        ChainResult
    """
    if not gates:
        raise DomainError("gate chain must contain at least one gate")
    fidelity = 1.0
    total_time = 0.0
    pulses = 0
    for metrics, duration in gates:
        if duration < 0:
            raise DomainError(f"gate duration must be non-negative, got {duration}")
        fidelity *= 1.0 - metrics.infidelity
        total_time += duration
        pulses += metrics.total_pulse_pairs_Np
    return ChainResult(fidelity=fidelity, total_time=total_time, total_pulses=pulses, n_gates=len(gates))


def swap_equivalent_chain(
    entangling: GateMetrics,
    duration: float,
    swap_constituent: GateMetrics = None,
    swap_duration: float = None,
) -> ChainResult:
    """
    A non-adjacent operation built as one SWAP (three gates) plus one entangling gate.

    The SWAP constituents default to copies of the entangling gate.
    """
    constituent = swap_constituent if swap_constituent is not None else entangling
    constituent_time = swap_duration if swap_duration is not None else duration
    chain = [(constituent, constituent_time)] * SWAP_GATE_COUNT + [(entangling, duration)]
    return compose_chain(chain)


def effective_fidelity(n_pulses: int, epsilon: float, base_fidelity: float) -> float:
    """
    Fidelity with a per-pulse amplitude error: |1 - N_p epsilon|^2 F0.

    Raises:
        DomainError: for negative epsilon or F0 outside [0, 1]
    """
    if n_pulses < 0:
        raise DomainError(f"pulse count must be non-negative, got {n_pulses}")
    if not (epsilon >= 0 and math.isfinite(epsilon)):
        raise DomainError(f"pulse error must be non-negative, got {epsilon}")
    if not 0.0 <= base_fidelity <= 1.0:
        raise DomainError(f"base fidelity must lie in [0, 1], got {base_fidelity}")
    return abs(1.0 - n_pulses * epsilon) ** 2 * base_fidelity

"""
Simulation-time and fidelity budget for a Trotterized run.
"""

import math
from dataclasses import asdict, dataclass
from typing import Dict, Union

from ..errors import DomainError
from ..gates.composition import effective_fidelity
from .compiler import TrotterCensus

REFERENCE_TOTAL_TIME_S = 50e-3
REFERENCE_FIDELITY = 0.75


@dataclass(frozen=True)
class FeasibilityReport:
    """Time and fidelity of `trotter_steps` steps of `gates_per_step` gates."""
    gates_per_step: int
    trotter_steps: int
    gate_time: float
    epsilon: float
    base_fidelity: float
    pulse_pairs: int
    total_time: float
    per_gate_fidelity: float
    per_step_fidelity: float
    simulation_fidelity: float
    reference_total_time: float = REFERENCE_TOTAL_TIME_S
    reference_fidelity: float = REFERENCE_FIDELITY

    @property
    def meets_reference(self) -> bool:
        return self.simulation_fidelity >= self.reference_fidelity

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["meets_reference"] = self.meets_reference
        return data


def feasibility_report(
    census: Union[TrotterCensus, int],
    gate_time: float,
    trotter_steps: int,
    epsilon: float = 0.0,
    base_fidelity: float = 1.0,
    pulse_pairs: int = 0,
) -> FeasibilityReport:
    """
    Chain every gate of the run through the pulse-error model.

    Args:
        census: Trotter-step census, or a plain gate count per step
        gate_time: Duration of one gate (s)
        trotter_steps: Number of Trotter steps
        epsilon: Fractional pulse-area error per pulse
        base_fidelity: Error-free gate fidelity F0
        pulse_pairs: Pulse pairs per gate

    Returns:
        FeasibilityReport
    """
    gates = census.total if isinstance(census, TrotterCensus) else int(census)
    if gates < 0 or trotter_steps < 0:
        raise DomainError("gate and step counts must be non-negative")
    if not (gate_time > 0 and math.isfinite(gate_time)):
        raise DomainError(f"gate time must be positive, got {gate_time}")

    per_gate = effective_fidelity(pulse_pairs, epsilon, base_fidelity)
    per_step = per_gate ** gates
    return FeasibilityReport(
        gates_per_step=gates,
        trotter_steps=trotter_steps,
        gate_time=gate_time,
        epsilon=epsilon,
        base_fidelity=base_fidelity,
        pulse_pairs=pulse_pairs,
        total_time=gates * gate_time * trotter_steps,
        per_gate_fidelity=per_gate,
        per_step_fidelity=per_step,
        simulation_fidelity=per_step ** trotter_steps,
    )


def print_feasibility_summary(report: FeasibilityReport) -> None:
    status = "✅" if report.meets_reference else "❌"
    print(f"\n📊 {report.trotter_steps} Trotter steps x {report.gates_per_step} gates "
          f"at {report.gate_time * 1e6:.2f} us")
    print(f"   total time:          {report.total_time * 1e3:.2f} ms "
          f"(reference ~{report.reference_total_time * 1e3:.0f} ms)")
    print(f"   per-gate fidelity:   {report.per_gate_fidelity:.8f}")
    print(f"   per-step fidelity:   {report.per_step_fidelity:.6f}")
    print(f"   {status} simulation fidelity: {report.simulation_fidelity:.4f} "
          f"(reference >= {report.reference_fidelity:.2f})")

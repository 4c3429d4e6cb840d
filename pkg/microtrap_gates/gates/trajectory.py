"""
Phase-space trajectories of the motional modes during a gate.

In each mode's rotating frame a pulse group is an instantaneous jump

    J_{m,k} = 2i eta_m beta_m z_k exp(i omega_m t_k)

with beta_m = p_mu + p_nu for the same-spin branch and p_mu - p_nu for the
opposite-spin branch, so the endpoint of a branch is beta_m times the
conjugate of delta_alpha_m. The geometric phase of a branch is
sum_{j>k} Im(J_j conj(J_k)) summed over modes; the same-spin minus
opposite-spin difference equals twice the accumulated gate phase.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List

import numpy as np

from ..errors import DomainError
from .engine import GateContext
from .sequence import PulseSequence

logger = logging.getLogger(__name__)


class Branch(Enum):
    """Spin configuration of the two target ions."""
    SAME_SPIN = "same"
    OPPOSITE_SPIN = "opposite"

    @property
    def sign(self) -> float:
        return 1.0 if self is Branch.SAME_SPIN else -1.0


@dataclass(frozen=True, eq=False)
class TrajectoryResult:
    """Sampled trajectory of every mode for one branch."""
    branch: Branch
    times: np.ndarray            # sequence units
    alpha: np.ndarray            # (n_modes, samples)
    endpoint: np.ndarray         # (n_modes,)
    mode_phases: np.ndarray      # (n_modes,)

    @property
    def geometric_phase(self) -> float:
        return float(self.mode_phases.sum())

    def to_csv_rows(self) -> List[List]:
        """Rows of (mode, branch, t/tau0, Re alpha, Im alpha)."""
        rows = []
        for m in range(self.alpha.shape[0]):
            for t, a in zip(self.times, self.alpha[m]):
                rows.append([m, self.branch.value, float(t), float(a.real), float(a.imag)])
        return rows


TRAJECTORY_CSV_HEADER = ["mode", "branch", "t_over_tau0", "re_alpha", "im_alpha"]


def branch_jumps(seq: PulseSequence, ctx: GateContext, branch: Branch) -> np.ndarray:
    """Jump J_{m,k} of every mode at every pulse group, shape (n_modes, groups)."""
    p_mu, p_nu = ctx.projections
    beta = p_mu + branch.sign * p_nu
    phases = np.outer(ctx.modes.frequencies, seq.times_in_seconds(ctx.modes.omega_t))
    amplitude = 2.0j * ctx.modes.lamb_dicke * beta
    return amplitude[:, None] * seq.kick_counts_z[None, :] * np.exp(1j * phases)


def trajectory(
    seq: PulseSequence,
    ctx: GateContext,
    branch: Branch = Branch.SAME_SPIN,
    samples: int = 201,
) -> TrajectoryResult:
    """
    Piecewise-constant trajectory sampled uniformly over [-T_G/2, T_G/2].

    Args:
        seq: Pulse sequence
        ctx: Gate context
        branch: Which spin branch to follow
        samples: Number of sample times (>= 2)

    Returns:
        TrajectoryResult with alpha(t) per mode, endpoint and geometric phases
    """
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples}")

    n_modes = ctx.modes.n_modes
    half = 0.5 * seq.gate_time_T_G
    times = np.linspace(-half, half, samples)

    if seq.group_count == 0:
        zeros = np.zeros((n_modes, samples), dtype=complex)
        return TrajectoryResult(branch, times, zeros, np.zeros(n_modes, dtype=complex), np.zeros(n_modes))

    jumps = branch_jumps(seq, ctx, branch)
    cumulative = np.cumsum(jumps, axis=1)
    before = cumulative - jumps
    phases = np.imag(np.sum(jumps * np.conj(before), axis=1))

    index = np.searchsorted(seq.times_t, times, side="right")
    padded = np.concatenate([np.zeros((n_modes, 1), dtype=complex), cumulative], axis=1)
    alpha = padded[:, index]

    return TrajectoryResult(
        branch=branch,
        times=times,
        alpha=alpha,
        endpoint=cumulative[:, -1].copy(),
        mode_phases=phases,
    )


def branch_phase_difference(seq: PulseSequence, ctx: GateContext) -> float:
    """Same-spin minus opposite-spin geometric phase."""
    same = trajectory(seq, ctx, Branch.SAME_SPIN, samples=2)
    opposite = trajectory(seq, ctx, Branch.OPPOSITE_SPIN, samples=2)
    return same.geometric_phase - opposite.geometric_phase


def trajectory_table(seq: PulseSequence, ctx: GateContext, samples: int = 201) -> Dict[Branch, TrajectoryResult]:
    """Both branches, keyed by Branch."""
    return {branch: trajectory(seq, ctx, branch, samples) for branch in Branch}

"""
Fast Gate Engine

Evaluates a pulse sequence against a two-ion context (a ModeSet, the two
target ions, the kick direction and the thermal occupations):

- delta_alpha: residual displacement of every mode
- accumulated_phase / delta_phi: spin-dependent phase and its error
- infidelity: lower-bound gate infidelity plus the resolving rate f_min

Phases use omega_m t_k with t converted to seconds, so sequences in trap
periods and in seconds give the same numbers.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError, InfiniteRateError
from ..physics.modes import ModeSet
from .sequence import PulseSequence, TimeUnit

logger = logging.getLogger(__name__)

TARGET_PHASE = math.pi / 4.0
PHASE_TERM_WEIGHT = 2.0 / 3.0
MOTIONAL_TERM_WEIGHT = 4.0 / 3.0


class PhaseConvention(Enum):
    """
    How pulse-group pairs enter the accumulated phase.

    UNORDERED_PAIRS sums each pair {i, j} once; ORDERED_PAIRS counts both
    (i, j) and (j, i), doubling the phase for the same sequence.
    """
    UNORDERED_PAIRS = "unordered_pairs"
    ORDERED_PAIRS = "ordered_pairs"

    @property
    def pair_factor(self) -> float:
        return 2.0 if self is PhaseConvention.ORDERED_PAIRS else 1.0


class RateConvention(Enum):
    """
    How the resolving repetition rate is read off a sequence.

    HALF_GROUP: max (|z_k| + |z_{k+1}|) / (2 dt_k), half of each adjacent
    group must fit into the gap.
    WHOLE_GROUP: max max(|z_k|, |z_{k+1}|) / dt_k, a whole group per gap.
    """
    HALF_GROUP = "half_group"
    WHOLE_GROUP = "whole_group"


# ============================================================================
# GATE CONTEXT
# ============================================================================

@dataclass(frozen=True, eq=False)
class GateContext:
    """Everything besides the sequence that a gate evaluation depends on."""
    modes: ModeSet
    target_ions: Tuple[int, int]
    laser_direction_K: np.ndarray
    thermal_occupation_nbar: np.ndarray
    phase_convention: PhaseConvention = PhaseConvention.UNORDERED_PAIRS
    _proj_mu: np.ndarray = field(init=False, repr=False)
    _proj_nu: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mu, nu = (int(i) for i in self.target_ions)
        n_ions = self.modes.n_ions
        if mu == nu:
            raise DomainError(f"target ions must differ, got ({mu}, {nu})")
        for ion in (mu, nu):
            if not 0 <= ion < n_ions:
                raise DomainError(f"ion {ion} outside array of {n_ions} ions")

        direction = np.asarray(self.laser_direction_K, dtype=float).reshape(-1)
        if direction.shape != (2,) or not np.all(np.isfinite(direction)):
            raise DomainError("laser direction must be a finite 2-vector")
        if abs(np.linalg.norm(direction) - 1.0) > 1e-9:
            raise DomainError(f"laser direction must be a unit vector, |K|={np.linalg.norm(direction):.6f}")

        nbar = np.asarray(self.thermal_occupation_nbar, dtype=float).reshape(-1)
        if nbar.size == 1 and self.modes.n_modes != 1:
            nbar = np.full(self.modes.n_modes, float(nbar[0]))
        if nbar.shape != (self.modes.n_modes,):
            raise DomainError(f"need {self.modes.n_modes} thermal occupations, got {nbar.size}")
        if np.any(nbar < 0) or not np.all(np.isfinite(nbar)):
            raise DomainError("thermal occupations must be finite and non-negative")

        direction.flags.writeable = False
        nbar.flags.writeable = False
        object.__setattr__(self, "target_ions", (mu, nu))
        object.__setattr__(self, "laser_direction_K", direction)
        object.__setattr__(self, "thermal_occupation_nbar", nbar)
        object.__setattr__(self, "_proj_mu", self.modes.ion_components(mu) @ direction)
        object.__setattr__(self, "_proj_nu", self.modes.ion_components(nu) @ direction)

    @classmethod
    def for_pair(
        cls,
        modes: ModeSet,
        mu: int,
        nu: int,
        nbar: Any = 0.0,
        direction: Optional[Sequence[float]] = None,
        phase_convention: PhaseConvention = PhaseConvention.UNORDERED_PAIRS,
    ) -> "GateContext":
        """
        Context for ions (mu, nu), kicking along their separation by default.

        Args:
            modes: Mode set of the array
            mu, nu: Target ion indices
            nbar: Scalar or per-mode thermal occupation
            direction: Kick direction (normalized here); defaults to the
                unit vector from ion mu to ion nu
            phase_convention: Pair-counting convention for the phase
        """
        if direction is None:
            sep = modes.positions[nu] - modes.positions[mu]
            norm = np.linalg.norm(sep)
            if norm == 0:
                raise DomainError("target ions coincide; give an explicit direction")
            vec = sep / norm
        else:
            vec = np.asarray(direction, dtype=float)
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise DomainError("laser direction must be non-zero")
            vec = vec / norm
        return cls(modes, (mu, nu), vec, np.broadcast_to(np.asarray(nbar, dtype=float), (modes.n_modes,)),
                   phase_convention=phase_convention)

    @property
    def projections(self) -> Tuple[np.ndarray, np.ndarray]:
        """(p_mu, p_nu): every mode vector at each target ion, projected on K."""
        return self._proj_mu, self._proj_nu

    def coupling_products(self) -> np.ndarray:
        """g_m = p_mu p_nu."""
        return self._proj_mu * self._proj_nu

    def mode_weights(self) -> np.ndarray:
        """w_m = (1/2 + nbar_m)(p_mu^2 + p_nu^2), weight of |delta_alpha_m|^2."""
        return (0.5 + self.thermal_occupation_nbar) * (self._proj_mu ** 2 + self._proj_nu ** 2)

    def with_wavevector(self, k: float) -> "GateContext":
        return replace(self, modes=self.modes.with_wavevector(k))


# ============================================================================
# CORE QUANTITIES
# ============================================================================

def _mode_phases(seq: PulseSequence, ctx: GateContext) -> np.ndarray:
    """omega_m t_k, shape (n_modes, groups)."""
    return np.outer(ctx.modes.frequencies, seq.times_in_seconds(ctx.modes.omega_t))


def delta_alpha(seq: PulseSequence, ctx: GateContext) -> np.ndarray:
    """
    Residual displacement delta_alpha_m = 2 eta_m sum_k z_k exp(-i omega_m t_k).

    Anti-symmetric sequences are summed in the reduced form
    -2i * 2 eta_m sum_{k>0} z_k sin(omega_m t_k), whose real part is exactly zero.
    """
    eta = ctx.modes.lamb_dicke
    if seq.group_count == 0:
        return np.zeros(ctx.modes.n_modes, dtype=complex)

    z = seq.kick_counts_z.astype(float)
    phases = _mode_phases(seq, ctx)
    if seq.antisymmetric or seq.is_antisymmetric():
        half = seq.group_count // 2
        reduced = np.sin(phases[:, half:]) @ z[half:]
        out = np.zeros(ctx.modes.n_modes, dtype=complex)
        out.imag = -4.0 * eta * reduced
        return out
    return 2.0 * eta * (np.exp(-1j * phases) @ z)


def pair_phase_sums(seq: PulseSequence, ctx: GateContext) -> np.ndarray:
    """P_m = sum_{i<j} z_i z_j sin(omega_m |t_i - t_j|), times the pair factor."""
    n = seq.group_count
    if n < 2:
        return np.zeros(ctx.modes.n_modes)
    i, j = np.triu_indices(n, k=1)
    z = seq.kick_counts_z.astype(float)
    gaps = np.abs(seq.times_t[j] - seq.times_t[i]) * seq.time_scale(ctx.modes.omega_t)
    sums = np.sin(np.outer(ctx.modes.frequencies, gaps)) @ (z[i] * z[j])
    return ctx.phase_convention.pair_factor * sums


def accumulated_phase(seq: PulseSequence, ctx: GateContext) -> float:
    """Spin-dependent phase Phi = 8 sum_m eta_m^2 g_m P_m."""
    eta = ctx.modes.lamb_dicke
    return float(8.0 * np.sum(eta ** 2 * ctx.coupling_products() * pair_phase_sums(seq, ctx)))


def delta_phi(seq: PulseSequence, ctx: GateContext) -> float:
    """Phase error |Phi| - pi/4."""
    return abs(accumulated_phase(seq, ctx)) - TARGET_PHASE


def infidelity_terms(phase_error: float, displacements: np.ndarray, weights: np.ndarray) -> float:
    """Unclamped (2/3) dphi^2 + (4/3) sum_m w_m |delta_alpha_m|^2."""
    motional = float(np.sum(weights * np.abs(displacements) ** 2))
    return PHASE_TERM_WEIGHT * phase_error ** 2 + MOTIONAL_TERM_WEIGHT * motional


def resolving_rate(
    kick_counts: np.ndarray,
    times: np.ndarray,
    convention: RateConvention = RateConvention.HALF_GROUP,
) -> float:
    """
    Minimum pulse repetition rate that resolves every adjacent group pair.

    Raises:
        InfiniteRateError: if two non-empty groups share an arrival time
    """
    z = np.abs(np.asarray(kick_counts, dtype=float))
    t = np.asarray(times, dtype=float)
    if z.size < 2:
        return 0.0
    dt = np.diff(t)
    if convention is RateConvention.HALF_GROUP:
        demand = 0.5 * (z[:-1] + z[1:])
    else:
        demand = np.maximum(z[:-1], z[1:])
    busy = demand > 0
    if np.any(busy & (dt <= 0)):
        raise InfiniteRateError("non-empty pulse groups coincide in time; repetition rate is unbounded")
    if not np.any(busy):
        return 0.0
    return float(np.max(demand[busy] / dt[busy]))


def min_rep_rate(seq: PulseSequence, convention: RateConvention = RateConvention.HALF_GROUP) -> float:
    """f_min in inverse units of the sequence's times (per tau0 by default)."""
    return resolving_rate(seq.kick_counts_z, seq.times_t, convention)


# ============================================================================
# METRICS
# ============================================================================

@dataclass(frozen=True, eq=False)
class GateMetrics:
    """Evaluation of one sequence in one context."""
    delta_phi: float
    delta_alpha: np.ndarray
    infidelity: float
    f_min: float
    total_pulse_pairs_Np: int
    mode_weights: np.ndarray
    raw_infidelity: float
    accumulated_phase: float
    phase_convention: PhaseConvention = PhaseConvention.UNORDERED_PAIRS
    rate_convention: RateConvention = RateConvention.HALF_GROUP
    time_unit: TimeUnit = TimeUnit.TRAP_PERIODS
    lower_bound: bool = True

    def phase_term(self) -> float:
        return PHASE_TERM_WEIGHT * self.delta_phi ** 2

    def motional_term(self) -> float:
        return MOTIONAL_TERM_WEIGHT * float(np.sum(self.mode_weights * np.abs(self.delta_alpha) ** 2))

    def recompute_infidelity(self) -> float:
        """Clamped infidelity from the stored components."""
        return _clamp(infidelity_terms(self.delta_phi, self.delta_alpha, self.mode_weights))

    def f_min_hz(self, omega_t: float) -> float:
        if self.time_unit is TimeUnit.TRAP_PERIODS:
            return self.f_min * omega_t / (2.0 * math.pi)
        return self.f_min

    @property
    def fidelity(self) -> float:
        return 1.0 - self.infidelity

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta_phi": self.delta_phi,
            "accumulated_phase": self.accumulated_phase,
            "delta_alpha_re": self.delta_alpha.real.tolist(),
            "delta_alpha_im": self.delta_alpha.imag.tolist(),
            "infidelity": self.infidelity,
            "raw_infidelity": self.raw_infidelity,
            "phase_term": self.phase_term(),
            "motional_term": self.motional_term(),
            "f_min": self.f_min,
            "f_min_unit": f"1/{self.time_unit.value}",
            "total_pulse_pairs": self.total_pulse_pairs_Np,
            "phase_convention": self.phase_convention.value,
            "rate_convention": self.rate_convention.value,
            "lower_bound": self.lower_bound,
        }


def _clamp(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def infidelity(
    seq: PulseSequence,
    ctx: GateContext,
    rate_convention: RateConvention = RateConvention.HALF_GROUP,
) -> GateMetrics:
    """
    Full evaluation of a sequence.

    Args:
        seq: Pulse sequence
        ctx: Gate context
        rate_convention: How f_min is read off the sequence

    Returns:
        GateMetrics with infidelity clamped to [0, 1] (raw value kept)
    """
    alphas = delta_alpha(seq, ctx)
    phase = accumulated_phase(seq, ctx)
    error = abs(phase) - TARGET_PHASE
    weights = ctx.mode_weights()
    raw = infidelity_terms(error, alphas, weights)
    if raw > 1.0:
        logger.debug("raw infidelity %.3e outside [0, 1], clamped", raw)

    alphas.flags.writeable = False
    weights.flags.writeable = False
    return GateMetrics(
        delta_phi=error,
        delta_alpha=alphas,
        infidelity=_clamp(raw),
        f_min=min_rep_rate(seq, rate_convention) if seq.group_count >= 2 else 0.0,
        total_pulse_pairs_Np=seq.total_pulse_pairs,
        mode_weights=weights,
        raw_infidelity=raw,
        accumulated_phase=phase,
        phase_convention=ctx.phase_convention,
        rate_convention=rate_convention,
        time_unit=seq.unit,
    )


# ============================================================================
# CALIBRATION
# ============================================================================

def phase_matched_wavevector(seq: PulseSequence, ctx: GateContext) -> float:
    """
    Wave vector at which the sequence accumulates exactly pi/4.

    Phi scales with k^2 through eta_m^2 while delta_alpha only scales with k,
    so rescaling k zeroes the phase error without touching the zeros of
    delta_alpha.
    """
    phase = accumulated_phase(seq, ctx)
    if phase == 0.0:
        raise DomainError("sequence accumulates no phase; cannot phase-match")
    return ctx.modes.laser_wavevector_k * math.sqrt(TARGET_PHASE / abs(phase))


def calibrate_context(seq: PulseSequence, ctx: GateContext) -> GateContext:
    """Context with the wave vector replaced by the phase-matched one."""
    k = phase_matched_wavevector(seq, ctx)
    logger.info("Phase-matched wave vector %.6e 1/m (was %.6e)", k, ctx.modes.laser_wavevector_k)
    return ctx.with_wavevector(k)


def rate_convention_gap(metrics: GateMetrics, published_f_min: float) -> float:
    """Ratio of a computed f_min to a quoted one; logs when they differ by >5%."""
    if published_f_min <= 0:
        raise DomainError("published f_min must be positive")
    ratio = metrics.f_min / published_f_min
    if abs(ratio - 1.0) > 0.05:
        logger.warning("f_min %.1f differs from quoted %.1f (ratio %.3f) under %s",
                       metrics.f_min, published_f_min, ratio, metrics.rate_convention.value)
    return ratio


def print_metrics_summary(metrics: GateMetrics, label: str = "", omega_t: Optional[float] = None) -> None:
    """Print a human-readable gate evaluation."""
    print(f"\n📊 Gate evaluation{f' ({label})' if label else ''}")
    print(f"   1-F            : {metrics.infidelity:.3e}  (lower bound, {metrics.phase_convention.value})")
    print(f"   phase term     : {metrics.phase_term():.3e}  (delta_phi = {metrics.delta_phi:+.3e})")
    print(f"   motional term  : {metrics.motional_term():.3e}")
    print(f"   max |d_alpha|  : {float(np.abs(metrics.delta_alpha).max()):.3e}")
    print(f"   f_min          : {metrics.f_min:.1f} 1/{metrics.time_unit.value}"
          + (f" ({metrics.f_min_hz(omega_t) / 1e6:.1f} MHz)" if omega_t else ""))
    print(f"   pulse pairs    : {metrics.total_pulse_pairs_Np}")

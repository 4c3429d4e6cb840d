"""
Optimizer sweeps: repetition-rate tables, the n_max^2 xi characteristic,
power-law fits of f_min against gate time, and the diagonal versus
nearest-neighbour-equivalent comparison.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import DomainError
from ..gates.composition import compose_chain
from ..gates.engine import GateContext
from .config import OptimizerConfig
from .parallel_executor import RestartExecutor
from .search import OptResult, optimize_apg

logger = logging.getLogger(__name__)

POWER_LAW_EXPONENT = -5.0 / 3.0
MONOTONE_THRESHOLD = 1e-2
DEFAULT_Z_BOUNDS = (5, 10, 20, 40, 80)
NN_EQUIVALENT_GATES = 4


# ============================================================================
# REPETITION-RATE SWEEP
# ============================================================================

@dataclass(frozen=True)
class SweepPoint:
    """One optimized gate in a sweep."""
    gate_time: float          # tau0
    z_bound: int
    f_min: float              # omega_t / 2pi
    infidelity: float
    n_max: int
    characteristic: float

    @classmethod
    def from_result(cls, result: OptResult, z_bound: int) -> "SweepPoint":
        return cls(
            gate_time=result.sequence.gate_time_T_G,
            z_bound=z_bound,
            f_min=result.metrics.f_min,
            infidelity=result.infidelity,
            n_max=result.n_max,
            characteristic=result.characteristic,
        )

    def to_row(self) -> list:
        return [self.gate_time, self.z_bound, self.f_min, self.infidelity, self.n_max, self.characteristic]


SWEEP_CSV_HEADER = ["T_G_over_tau0", "z_bound", "f_min_over_omega_t_2pi", "infidelity", "n_max", "n_max_sq_xi"]


def sweep_rep_rate(
    ctx: GateContext,
    gate_times: Sequence[float],
    cfg: OptimizerConfig,
    z_bounds: Optional[Sequence[int]] = None,
    executor: Optional[RestartExecutor] = None,
) -> List[SweepPoint]:
    """
    Optimize one gate per (gate time, z bound) and tabulate f_min and 1-F.

    Args:
        ctx: Gate context
        gate_times: Gate times in trap periods (non-empty)
        cfg: Base configuration; gate time and z bound are overridden per point
        z_bounds: Several bounds per gate time trace out an (f_min, 1-F) curve;
            defaults to cfg.z_bound alone

    Returns:
        Points sorted by gate time, then z bound
    """
    if not gate_times:
        raise DomainError("sweep needs at least one gate time")
    bounds = sorted(set(z_bounds)) if z_bounds else [cfg.z_bound]

    points = []
    for gate_time in sorted(gate_times):
        for bound in bounds:
            result = optimize_apg(ctx, replace(cfg, gate_time_T_G=gate_time, z_bound=bound), executor)
            points.append(SweepPoint.from_result(result, bound))
            logger.info("T_G=%.3f z_bound=%d: f_min=%.1f 1-F=%.3e", gate_time, bound,
                        result.metrics.f_min, result.infidelity)
    return points


# ============================================================================
# CHARACTERISTIC CURVE
# ============================================================================

@dataclass(frozen=True)
class CharacteristicCurve:
    """(n_max^2 xi, 1-F) scatter and whether the high-infidelity part is monotone."""
    points: Tuple[Tuple[float, float], ...]
    monotone_above_threshold: bool
    threshold: float = MONOTONE_THRESHOLD

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "monotone_above_threshold": self.monotone_above_threshold,
            "points": [{"n_max_sq_xi": c, "infidelity": inf} for c, inf in self.points],
        }


def characteristic_curve(
    results: Iterable[Union[OptResult, SweepPoint]],
    threshold: float = MONOTONE_THRESHOLD,
) -> CharacteristicCurve:
    """
    Scatter of infidelity against n_max^2 xi, from optimizer results or sweep points.

    The monotone flag is True when, ordered by n_max^2 xi, the infidelity of
    every point above threshold is non-increasing.
    """
    rows = sorted((r.characteristic, r.infidelity) for r in results)
    if not rows:
        raise DomainError("characteristic curve needs at least one result")
    high = [inf for _, inf in rows if inf > threshold]
    monotone = all(b <= a for a, b in zip(high, high[1:]))
    return CharacteristicCurve(points=tuple(rows), monotone_above_threshold=monotone, threshold=threshold)


# ============================================================================
# POWER LAW
# ============================================================================

@dataclass(frozen=True)
class PowerLawFit:
    """f_min = a * tau^exponent with a fixed exponent."""
    coefficient: float
    exponent: float
    residual: float
    points: Tuple[Tuple[float, float], ...] = field(default=())

    def predict(self, tau: float) -> float:
        return self.coefficient * tau ** self.exponent

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coefficient": self.coefficient,
            "exponent": self.exponent,
            "residual": self.residual,
            "points": [{"T_G_over_tau0": t, "f_min": f} for t, f in self.points],
        }


def fit_power_law(points: Sequence[Tuple[float, float]], exponent: float = POWER_LAW_EXPONENT) -> PowerLawFit:
    """
    Least-squares fit of log f = log a + exponent * log tau.

    Args:
        points: (gate time, f_min) pairs, at least two, all positive

    Returns:
        PowerLawFit; residual is the sum of squared log residuals
    """
    if len(points) < 2:
        raise DomainError(f"power-law fit needs at least 2 points, got {len(points)}")
    data = np.asarray(points, dtype=float)
    if np.any(~np.isfinite(data)) or np.any(data <= 0):
        raise DomainError("power-law fit needs positive, finite gate times and rates")

    log_tau, log_f = np.log(data[:, 0]), np.log(data[:, 1])
    log_a = float(np.mean(log_f - exponent * log_tau))
    residual = float(np.sum((log_f - log_a - exponent * log_tau) ** 2))
    return PowerLawFit(
        coefficient=math.exp(log_a),
        exponent=exponent,
        residual=residual,
        points=tuple((float(t), float(f)) for t, f in data),
    )


def rate_law_from_sweep(
    points: Iterable[SweepPoint],
    max_infidelity: float = MONOTONE_THRESHOLD,
    exponent: float = POWER_LAW_EXPONENT,
) -> PowerLawFit:
    """
    Fit the lowest qualifying f_min at each swept gate time.

    A point qualifies when it is a non-empty gate with 1-F <= max_infidelity.

    Raises:
        DomainError: if fewer than two gate times have a qualifying point
    """
    best: Dict[float, float] = {}
    for p in points:
        if p.n_max == 0 or p.f_min <= 0 or p.infidelity > max_infidelity:
            continue
        best[p.gate_time] = min(p.f_min, best.get(p.gate_time, math.inf))
    return fit_power_law(sorted(best.items()), exponent)


# ============================================================================
# DIAGONAL VERSUS NEAREST-NEIGHBOUR EQUIVALENT
# ============================================================================

def min_rate_for_fidelity(
    ctx: GateContext,
    gate_time: float,
    cfg: OptimizerConfig,
    threshold: float = 0.99,
    z_bounds: Sequence[int] = DEFAULT_Z_BOUNDS,
    chain_length: int = 1,
    executor: Optional[RestartExecutor] = None,
) -> Optional[OptResult]:
    """
    Lowest-f_min optimized gate whose chain of chain_length copies reaches threshold.

    An all-zero sequence applies no gate and never qualifies, whatever the
    threshold.

    Returns:
        The qualifying OptResult with the smallest f_min, or None
    """
    best = None
    for bound in sorted(z_bounds):
        result = optimize_apg(ctx, replace(cfg, gate_time_T_G=gate_time, z_bound=bound), executor)
        if result.n_max == 0:
            continue
        chain = compose_chain([(result.metrics, gate_time)] * chain_length)
        if chain.fidelity >= threshold and (best is None or result.metrics.f_min < best.metrics.f_min):
            best = result
    return best


@dataclass(frozen=True)
class DiagonalComparison:
    """f_min needed for a diagonal gate and for its four-gate NN equivalent."""
    operation_times: Tuple[float, ...]
    diagonal_rates: Tuple[float, ...]
    nn_rates: Tuple[float, ...]
    diagonal_fit: PowerLawFit
    nn_fit: PowerLawFit

    @property
    def coefficient_ratio(self) -> float:
        return self.nn_fit.coefficient / self.diagonal_fit.coefficient

    def to_dict(self) -> Dict[str, Any]:
        return {
            "operation_times": list(self.operation_times),
            "diagonal_rates": list(self.diagonal_rates),
            "nn_rates": list(self.nn_rates),
            "diagonal_fit": self.diagonal_fit.to_dict(),
            "nn_fit": self.nn_fit.to_dict(),
            "coefficient_ratio": self.coefficient_ratio,
        }

    def to_csv_rows(self) -> List[list]:
        return [[t, d, n] for t, d, n in zip(self.operation_times, self.diagonal_rates, self.nn_rates)]


DIAGONAL_CSV_HEADER = ["operation_time_over_tau0", "diagonal_f_min", "nn_equivalent_f_min"]


def compare_diagonal_to_nn(
    nn_ctx: GateContext,
    diag_ctx: GateContext,
    operation_times: Sequence[float],
    cfg: OptimizerConfig,
    threshold: float = 0.99,
    z_bounds: Sequence[int] = DEFAULT_Z_BOUNDS,
    executor: Optional[RestartExecutor] = None,
) -> DiagonalComparison:
    """
    Compare a direct diagonal gate with SWAP + entangling NN gates.

    At operation time T the NN equivalent is four NN gates of duration T/4
    whose fidelities multiply; both f_min series are fitted with the fixed
    -5/3 power law against T.
    """
    times, diag_rates, nn_rates = [], [], []
    for op_time in sorted(operation_times):
        diag = min_rate_for_fidelity(diag_ctx, op_time, cfg, threshold, z_bounds, 1, executor)
        nn = min_rate_for_fidelity(nn_ctx, op_time / NN_EQUIVALENT_GATES, cfg, threshold, z_bounds,
                                   NN_EQUIVALENT_GATES, executor)
        if diag is None or nn is None:
            logger.warning("No gate reaches F >= %.4f at T=%.3f tau0; point skipped", threshold, op_time)
            continue
        times.append(op_time)
        diag_rates.append(diag.metrics.f_min)
        nn_rates.append(nn.metrics.f_min)

    if len(times) < 2:
        raise DomainError("fewer than two operation times reached the fidelity threshold")
    return DiagonalComparison(
        operation_times=tuple(times),
        diagonal_rates=tuple(diag_rates),
        nn_rates=tuple(nn_rates),
        diagonal_fit=fit_power_law(list(zip(times, diag_rates))),
        nn_fit=fit_power_law(list(zip(times, nn_rates))),
    )


def print_sweep_summary(
    points: Sequence[SweepPoint],
    fit: Optional[PowerLawFit] = None,
    comparison: Optional[DiagonalComparison] = None,
) -> None:
    """Print the sweep table, the fitted rate law and the diagonal comparison."""
    print(f"\n📊 Repetition-rate sweep: {len(points)} optimized gates")
    print(f"   {'T_G':>6}  {'z_bound':>7}  {'f_min':>9}  {'1-F':>10}  {'n_max':>5}")
    for p in points:
        print(f"   {p.gate_time:6.3f}  {p.z_bound:7d}  {p.f_min:9.1f}  {p.infidelity:10.3e}  {p.n_max:5d}")
    if fit is not None:
        print(f"   f_min = {fit.coefficient:.1f} * T_G^{fit.exponent:.3f}  (log residual {fit.residual:.2e})")
    if comparison is not None:
        print(f"   diagonal a = {comparison.diagonal_fit.coefficient:.1f}, "
              f"NN equivalent a = {comparison.nn_fit.coefficient:.1f} "
              f"(ratio {comparison.coefficient_ratio:.2f})")

"""
Integer Search over Anti-Symmetric Pulse Sequences

The free variables are the positive-time kick counts h = (z_1, ..., z_{G/2})
on the uniform grid; the full sequence is always PulseSequence.apg(h), so
anti-symmetry holds for every candidate by construction.

Small boxes are enumerated exhaustively. Larger boxes use seeded
multi-start steepest descent with single-coordinate and coordinate-pair
integer moves over a shrinking step schedule, re-expanding while any step
still improves. The search ranks candidates with ApgCostModel; reported
metrics always come from gate_engine.infidelity.
"""

import logging
import math
import time
from dataclasses import dataclass
from itertools import combinations, product
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..gates.engine import (
    MOTIONAL_TERM_WEIGHT,
    PHASE_TERM_WEIGHT,
    TARGET_PHASE,
    GateContext,
    GateMetrics,
    infidelity,
)
from ..gates.sequence import PulseSequence
from .config import OptimizerConfig, StopReason
from .parallel_executor import RestartExecutor, create_executor, raise_first_failure

logger = logging.getLogger(__name__)

SHORTLIST_SIZE = 16
SHORTLIST_TOLERANCE = 1e-9


# ============================================================================
# COST MODEL
# ============================================================================

class ApgCostModel:
    """
    Closed-form infidelity of apg(h) as a function of the free counts h.

    |delta_alpha_m| = |(A h)_m| with A_mk = 4 eta_m sin(omega_m t_k), and
    the accumulated phase is the quadratic form Phi = h^T Q h / 2.
    """

    def __init__(self, ctx: GateContext, cfg: OptimizerConfig):
        self.n_free = cfg.free_counts
        self.gate_time = cfg.gate_time_T_G

        template = PulseSequence.apg(np.zeros(self.n_free, dtype=np.int64), cfg.gate_time_T_G)
        times = template.times_in_seconds(ctx.modes.omega_t)
        omega = ctx.modes.frequencies
        eta = ctx.modes.lamb_dicke

        self.motion = 4.0 * eta[:, None] * np.sin(np.outer(omega, times[self.n_free:]))
        self.weights = ctx.mode_weights()

        gaps = np.abs(times[:, None] - times[None, :])
        couplings = 8.0 * eta ** 2 * ctx.coupling_products() * ctx.phase_convention.pair_factor
        full = np.einsum("m,mij->ij", couplings, np.sin(omega[:, None, None] * gaps[None]))

        mirror = np.zeros((2 * self.n_free, self.n_free))
        for k in range(self.n_free):
            mirror[self.n_free + k, k] = 1.0
            mirror[self.n_free - 1 - k, k] = -1.0
        self.quadratic = mirror.T @ full @ mirror

    def phases(self, half: np.ndarray) -> np.ndarray:
        h = np.atleast_2d(half).astype(float)
        return 0.5 * np.einsum("ci,ij,cj->c", h, self.quadratic, h)

    def costs(self, half: np.ndarray) -> np.ndarray:
        """Unclamped infidelity for each row of half, shape (C,)."""
        h = np.atleast_2d(half).astype(float)
        phase_error = np.abs(self.phases(h)) - TARGET_PHASE
        displacement = h @ self.motion.T
        motional = (displacement ** 2) @ self.weights
        return PHASE_TERM_WEIGHT * phase_error ** 2 + MOTIONAL_TERM_WEIGHT * motional

    def cost(self, half: np.ndarray) -> float:
        return float(self.costs(half)[0])


def neighbour_moves(n_free: int) -> np.ndarray:
    """Unit moves: +-e_i and (+-e_i +- e_j) for i < j."""
    moves = []
    for i in range(n_free):
        for s in (1, -1):
            move = np.zeros(n_free, dtype=np.int64)
            move[i] = s
            moves.append(move)
    for i, j in combinations(range(n_free), 2):
        for si, sj in product((1, -1), repeat=2):
            move = np.zeros(n_free, dtype=np.int64)
            move[i], move[j] = si, sj
            moves.append(move)
    return np.array(moves, dtype=np.int64)


# ============================================================================
# RESULT
# ============================================================================

@dataclass(frozen=True, eq=False)
class OptResult:
    """Best sequence found and its metrics."""
    sequence: PulseSequence
    metrics: GateMetrics
    n_max: int
    characteristic: float           # n_max^2 xi
    evaluations: int
    wall_time: float                # s
    reached_target: bool
    stop_reason: StopReason
    restarts_run: int

    @property
    def infidelity(self) -> float:
        return self.metrics.infidelity

    def to_dict(self) -> Dict[str, Any]:
        """JSON form for replay; wall time is left out so repeated runs compare equal."""
        return {
            "sequence": self.sequence.to_dict(),
            "metrics": self.metrics.to_dict(),
            "n_max": self.n_max,
            "characteristic": self.characteristic,
            "evaluations": self.evaluations,
            "reached_target": self.reached_target,
            "stop_reason": self.stop_reason.value,
            "restarts_run": self.restarts_run,
        }


def rank_key(seq: PulseSequence, metrics: GateMetrics) -> Tuple:
    """Lower infidelity, then lower n_max, then lexicographic z."""
    return (metrics.infidelity, seq.n_max, tuple(int(v) for v in seq.kick_counts_z))


# ============================================================================
# SEARCH
# ============================================================================

def descend(
    model: ApgCostModel,
    start: np.ndarray,
    z_bound: int,
    step_schedule: Tuple[int, ...],
    max_iterations: int = 20_000,
) -> Tuple[np.ndarray, float, int]:
    """
    Steepest descent over integer moves from one start point.

    Returns:
        (half counts, model cost, number of cost evaluations)
    """
    moves = neighbour_moves(model.n_free)
    h = np.array(start, dtype=np.int64)
    cost = model.cost(h)
    evaluations = 1
    iterations = 0

    improved = True
    while improved and iterations < max_iterations:
        improved = False
        for step in step_schedule:
            while iterations < max_iterations:
                iterations += 1
                candidates = h[None, :] + step * moves
                candidates = candidates[np.all(np.abs(candidates) <= z_bound, axis=1)]
                if candidates.size == 0:
                    break
                costs = model.costs(candidates)
                evaluations += len(costs)
                best = int(np.argmin(costs))
                if costs[best] < cost:
                    h, cost = candidates[best], float(costs[best])
                    improved = True
                else:
                    break

    if iterations >= max_iterations:
        logger.warning("descent stopped at the iteration cap (%d)", max_iterations)
    return h, cost, evaluations


def _finalize(half: np.ndarray, ctx: GateContext, cfg: OptimizerConfig) -> Tuple[PulseSequence, GateMetrics]:
    seq = PulseSequence.apg(half, cfg.gate_time_T_G)
    return seq, infidelity(seq, ctx, cfg.rate_convention)


def _shortlist(costs: np.ndarray) -> np.ndarray:
    order = np.argsort(costs, kind="stable")
    floor = costs[order[0]]
    close = np.flatnonzero(costs <= floor + SHORTLIST_TOLERANCE * max(abs(floor), 1e-300))
    return np.union1d(order[:SHORTLIST_SIZE], close)


def exhaustive_search(ctx: GateContext, cfg: OptimizerConfig) -> Tuple[PulseSequence, GateMetrics, int]:
    """
    Enumerate every half vector in [-z_bound, z_bound]^(G/2).

    Returns:
        (best sequence, its metrics, number of candidates)
    """
    model = ApgCostModel(ctx, cfg)
    axis = np.arange(-cfg.z_bound, cfg.z_bound + 1, dtype=np.int64)
    grid = np.array(np.meshgrid(*([axis] * cfg.free_counts), indexing="ij")).reshape(cfg.free_counts, -1).T
    costs = model.costs(grid)

    finalists = [_finalize(grid[i], ctx, cfg) for i in _shortlist(costs)]
    seq, metrics = min(finalists, key=lambda pair: rank_key(*pair))
    return seq, metrics, len(grid)


def optimize_apg(
    ctx: GateContext,
    cfg: OptimizerConfig,
    executor: Optional[RestartExecutor] = None,
) -> OptResult:
    """
    Find the anti-symmetric sequence with the lowest infidelity at fixed gate time.

    Args:
        ctx: Gate context (read-only, shared by all restarts)
        cfg: Optimizer configuration
        executor: Thread pool for restarts (created from cfg when omitted)

    Returns:
        OptResult; reached_target is False when the target was not met
    """
    start_time = time.perf_counter()
    xi = ctx.modes.xi

    if cfg.is_exhaustive:
        seq, metrics, evaluations = exhaustive_search(ctx, cfg)
        logger.info("Exhaustive search over %d candidates: 1-F=%.3e", evaluations, metrics.infidelity)
        return OptResult(
            sequence=seq,
            metrics=metrics,
            n_max=seq.n_max,
            characteristic=seq.n_max ** 2 * xi,
            evaluations=evaluations,
            wall_time=time.perf_counter() - start_time,
            reached_target=metrics.infidelity <= cfg.target_infidelity,
            stop_reason=StopReason.EXHAUSTIVE,
            restarts_run=0,
        )

    model = ApgCostModel(ctx, cfg)
    executor = executor or create_executor(cfg.max_workers)
    children = np.random.SeedSequence(cfg.rng_seed).spawn(cfg.restarts)

    def run_restart(child: np.random.SeedSequence):
        rng = np.random.default_rng(child)
        start = rng.integers(-cfg.z_bound, cfg.z_bound + 1, size=cfg.free_counts)
        return descend(model, start, cfg.z_bound, cfg.step_schedule, cfg.max_descent_iterations)

    best: Optional[Tuple[PulseSequence, GateMetrics]] = None
    evaluations = 0
    restarts_run = 0
    stop_reason = StopReason.BUDGET_EXHAUSTED

    for offset in range(0, cfg.restarts, cfg.batch_size):
        batch = children[offset:offset + cfg.batch_size]
        results = executor.execute_batch(
            run_restart, batch, labels=[f"restart_{offset + i}" for i in range(len(batch))]
        )
        raise_first_failure(results)

        for result in results:
            half, _, count = result.value
            evaluations += count
            candidate = _finalize(half, ctx, cfg)
            if best is None or rank_key(*candidate) < rank_key(*best):
                best = candidate
        restarts_run += len(batch)

        logger.info("Restarts %d/%d: best 1-F=%.3e (n_max=%d)",
                    restarts_run, cfg.restarts, best[1].infidelity, best[0].n_max)
        if best[1].infidelity <= cfg.target_infidelity:
            stop_reason = StopReason.TARGET_REACHED
            break

    seq, metrics = best
    return OptResult(
        sequence=seq,
        metrics=metrics,
        n_max=seq.n_max,
        characteristic=seq.n_max ** 2 * xi,
        evaluations=evaluations,
        wall_time=time.perf_counter() - start_time,
        reached_target=metrics.infidelity <= cfg.target_infidelity,
        stop_reason=stop_reason,
        restarts_run=restarts_run,
    )


def brute_force_optimum(ctx: GateContext, cfg: OptimizerConfig) -> Tuple[PulseSequence, GateMetrics]:
    """Reference optimum: every candidate evaluated through gate_engine.infidelity."""
    best = None
    axis = range(-cfg.z_bound, cfg.z_bound + 1)
    for half in product(axis, repeat=cfg.free_counts):
        candidate = _finalize(np.array(half, dtype=np.int64), ctx, cfg)
        if best is None or rank_key(*candidate) < rank_key(*best):
            best = candidate
    return best


def print_opt_summary(result: OptResult, omega_t: Optional[float] = None) -> None:
    """Print a human-readable optimization summary."""
    metrics = result.metrics
    status = "✅" if result.reached_target else "⚠️"
    print(f"\n{status} Optimized APG({result.sequence.group_count}) at T_G = "
          f"{result.sequence.gate_time_T_G:.3f} tau0 ({result.stop_reason.value})")
    print(f"   1-F          : {metrics.infidelity:.3e}")
    print(f"   delta_phi    : {metrics.delta_phi:+.3e}")
    print(f"   f_min        : {metrics.f_min:.1f} omega_t/2pi"
          + (f" ({metrics.f_min_hz(omega_t) / 1e6:.1f} MHz)" if omega_t else ""))
    print(f"   n_max        : {result.n_max}  (n_max^2 xi = {result.characteristic:.3e})")
    print(f"   z            : {result.sequence.kick_counts_z.tolist()}")
    print(f"   evaluations  : {result.evaluations} in {result.wall_time:.2f}s"
          + (f", {result.restarts_run} restarts" if result.restarts_run else ""))
    if math.isfinite(metrics.raw_infidelity) and metrics.raw_infidelity > 1.0:
        print(f"   (raw infidelity {metrics.raw_infidelity:.3e} clamped)")

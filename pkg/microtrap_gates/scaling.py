"""
Array Scaling

Re-uses a pulse sequence optimized on the 2x2 cell for gates inside larger
N x N arrays, evaluating the infidelity over every mode of the big array.
Bond positions are grouped into orbits under the eight symmetries of the
square so each inequivalent position is evaluated once.

Position labels have the form "<kind>[r0,c0|r1,c1]" where kind is edge
(both sites on the outer ring), center (both sites on the innermost ring)
or intermediate, and the sites are the orbit's representative bond.
"""

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, UnsupportedSizeError
from .gates.engine import GateContext, GateMetrics, calibrate_context, infidelity
from .gates.sequence import PulseSequence
from .optimization.parallel_executor import RestartExecutor, create_executor, raise_first_failure
from .physics.modes import ModeSet, solve_modes
from .physics.trap_array import TrapArray

logger = logging.getLogger(__name__)

DEFAULT_MAX_SIZE = 12

Site = Tuple[int, int]
Bond = Tuple[Site, Site]


# ============================================================================
# SYMMETRY ORBITS
# ============================================================================

def square_symmetries(n: int):
    """The eight dihedral maps of an n x n grid of sites."""
    m = n - 1
    return [
        lambda r, c: (r, c),
        lambda r, c: (c, m - r),
        lambda r, c: (m - r, m - c),
        lambda r, c: (m - c, r),
        lambda r, c: (r, m - c),
        lambda r, c: (m - r, c),
        lambda r, c: (c, r),
        lambda r, c: (m - c, m - r),
    ]


def _canonical(a: Site, b: Site) -> Bond:
    return (a, b) if a <= b else (b, a)


def grid_bonds(n: int, diagonal: bool = False) -> List[Bond]:
    """Nearest-neighbour (or diagonal) bonds of an n x n grid."""
    bonds = []
    for r in range(n):
        for c in range(n):
            if diagonal:
                if r + 1 < n and c + 1 < n:
                    bonds.append(_canonical((r, c), (r + 1, c + 1)))
                if r + 1 < n and c >= 1:
                    bonds.append(_canonical((r, c), (r + 1, c - 1)))
            else:
                if c + 1 < n:
                    bonds.append(((r, c), (r, c + 1)))
                if r + 1 < n:
                    bonds.append(((r, c), (r + 1, c)))
    return sorted(bonds)


def ring_depth(n: int, site: Site) -> int:
    r, c = site
    return min(r, c, n - 1 - r, n - 1 - c)


def bond_kind(n: int, bond: Bond) -> str:
    depths = [ring_depth(n, s) for s in bond]
    if max(depths) == 0:
        return "edge"
    if min(depths) == (n - 1) // 2:
        return "center"
    return "intermediate"


@dataclass(frozen=True)
class BondOrbit:
    """Symmetry-equivalent bonds with a deterministic representative."""
    representative: Bond
    members: Tuple[Bond, ...]
    kind: str

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def label(self) -> str:
        (r0, c0), (r1, c1) = self.representative
        return f"{self.kind}[{r0},{c0}|{r1},{c1}]"


def bond_orbits(n: int, diagonal: bool = False) -> List[BondOrbit]:
    """
    Partition the grid bonds into orbits under the square's symmetry group.

    Returns:
        Orbits sorted by representative (lexicographically smallest member)
    """
    if n < 2:
        raise DomainError(f"need at least a 2x2 grid, got n={n}")
    maps = square_symmetries(n)
    seen = set()
    orbits = []
    for bond in grid_bonds(n, diagonal):
        if bond in seen:
            continue
        members = sorted({_canonical(f(*bond[0]), f(*bond[1])) for f in maps})
        seen.update(members)
        orbits.append(BondOrbit(representative=members[0], members=tuple(members), kind=bond_kind(n, members[0])))
    return sorted(orbits, key=lambda o: o.representative)


# ============================================================================
# EMBEDDED GATES
# ============================================================================

@lru_cache(maxsize=32)
def cached_modes(array: TrapArray, solver: str = "jacobi") -> ModeSet:
    """Mode set per (frozen, hashable) array."""
    return solve_modes(array, solver=solver)


@dataclass(frozen=True, eq=False)
class EmbeddedGate:
    """A donor sequence applied to one bond of an N x N array."""
    array: TrapArray
    target_pair: Tuple[int, int]
    sequence: PulseSequence
    position_label: str = ""

    def __post_init__(self):
        mu, nu = self.target_pair
        (r0, c0), (r1, c1) = self.array.site(mu), self.array.site(nu)
        if (abs(r1 - r0), abs(c1 - c0)) not in {(0, 1), (1, 0), (1, 1)}:
            raise DomainError(f"ions {mu} and {nu} are neither nearest nor diagonal neighbours")

    @property
    def is_diagonal(self) -> bool:
        (r0, c0), (r1, c1) = (self.array.site(i) for i in self.target_pair)
        return r0 != r1 and c0 != c1


def embed_donor(
    n: int,
    donor: PulseSequence,
    base_array: TrapArray,
    bond: Optional[Bond] = None,
    label: str = "",
) -> EmbeddedGate:
    """
    Place the donor sequence on a bond of an n x n version of base_array.

    The default bond is the first row's leftmost nearest-neighbour pair.
    """
    array = replace(base_array, rows=n, cols=n)
    (r0, c0), (r1, c1) = bond if bond is not None else ((0, 0), (0, 1))
    pair = (array.ion_index(r0, c0), array.ion_index(r1, c1))
    return EmbeddedGate(array=array, target_pair=pair, sequence=donor, position_label=label)


def scale_infidelity(g: EmbeddedGate, nbar: float = 0.0, solver: str = "jacobi") -> GateMetrics:
    """
    Infidelity of the embedded gate over all 2N^2 modes.

    The kick direction is recomputed along the embedded pair's equilibrium
    separation.
    """
    modes = cached_modes(g.array, solver)
    ctx = GateContext.for_pair(modes, g.target_pair[0], g.target_pair[1], nbar=nbar)
    return infidelity(g.sequence, ctx)


def calibrated_base_array(donor: PulseSequence, base_array: TrapArray, diagonal: bool = False) -> TrapArray:
    """base_array with its wave vector phase-matched to the donor on the 2x2 cell."""
    cell = replace(base_array, rows=2, cols=2)
    ctx = GateContext.for_pair(cached_modes(cell), 0, 3 if diagonal else 1)
    k = calibrate_context(donor, ctx).modes.laser_wavevector_k
    return base_array.with_wavevector(k)


# ============================================================================
# POSITION SWEEP
# ============================================================================

@dataclass(frozen=True)
class ScalingRow:
    """Infidelity of the donor gate at one bond orbit of an N x N array."""
    n: int
    label: str
    kind: str
    orbit_size: int
    infidelity: float
    delta_phi: float
    motional_term: float
    n_modes: int


SCALING_CSV_HEADER = ["N", "position_label", "kind", "orbit_size", "infidelity", "delta_phi", "motional_term", "n_modes"]


def position_sweep(
    array_sizes: Sequence[int],
    donor: PulseSequence,
    base_array: Optional[TrapArray] = None,
    diagonal: bool = False,
    nbar: float = 0.0,
    max_size: int = DEFAULT_MAX_SIZE,
    executor: Optional[RestartExecutor] = None,
) -> List[ScalingRow]:
    """
    Evaluate the donor at every inequivalent bond position of each N x N array.

    Args:
        array_sizes: Values of N
        donor: Anti-symmetric sequence optimized on the 2x2 cell
        base_array: Trap parameters (default: 2x2 lab defaults)
        diagonal: Sweep diagonal bonds instead of nearest-neighbour bonds
        nbar: Thermal occupation of every mode
        max_size: Largest N accepted

    Returns:
        Rows sorted by N, then label
    """
    if not donor.is_antisymmetric():
        raise DomainError("donor sequence must be anti-symmetric")
    sizes = sorted(set(int(n) for n in array_sizes))
    if not sizes:
        raise DomainError("no array sizes given")
    too_big = [n for n in sizes if n > max_size]
    if too_big:
        raise UnsupportedSizeError(f"array size {too_big[0]} exceeds max_size={max_size}")

    base = base_array if base_array is not None else TrapArray.from_lab_units()
    executor = executor or create_executor()

    rows = []
    for n in sizes:
        orbits = bond_orbits(n, diagonal)
        cached_modes(replace(base, rows=n, cols=n))

        def evaluate(orbit: BondOrbit) -> GateMetrics:
            return scale_infidelity(embed_donor(n, donor, base, orbit.representative, orbit.label), nbar)

        results = executor.execute_batch(evaluate, orbits, labels=[o.label for o in orbits])
        raise_first_failure(results)
        for orbit, result in zip(orbits, results):
            metrics = result.value
            rows.append(ScalingRow(
                n=n,
                label=orbit.label,
                kind=orbit.kind,
                orbit_size=orbit.size,
                infidelity=metrics.infidelity,
                delta_phi=metrics.delta_phi,
                motional_term=metrics.motional_term(),
                n_modes=len(metrics.delta_alpha),
            ))
        logger.info("N=%d: %d orbits, worst 1-F=%.3e", n, len(orbits),
                    max(r.infidelity for r in rows if r.n == n))

    return sorted(rows, key=lambda r: (r.n, r.label))


def worst_by_size(rows: Sequence[ScalingRow]) -> Dict[int, float]:
    """Largest infidelity per array size."""
    worst: Dict[int, float] = {}
    for row in rows:
        worst[row.n] = max(worst.get(row.n, -math.inf), row.infidelity)
    return dict(sorted(worst.items()))


def print_scaling_summary(rows: Sequence[ScalingRow]) -> None:
    print("\n📊 Donor gate across array sizes")
    print(f"   {'N':>3}  {'position':<28} {'orbit':>5}  {'1-F':>10}")
    for row in rows:
        print(f"   {row.n:>3}  {row.label:<28} {row.orbit_size:>5}  {row.infidelity:>10.3e}")
    worst = worst_by_size(rows)
    print("   worst: " + ", ".join(f"N={n}: {v:.2e}" for n, v in worst.items()))

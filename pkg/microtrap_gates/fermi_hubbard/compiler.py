"""
Trotter-Factor Compiler

Each mapped term exp(-i c P t/n) of arity >= 3 is built as
U_UMQ^dagger exp(-i phi Z_hub) U_UMQ, where the forward UMQ is one GP gate
between the hub qubit and every other qubit of the string. When the hub is
not next to a spoke, the hub walks toward it by SWAPs along a shortest path
on the embedding graph. The backward UMQ replays the forward gate list in
reverse, which also undoes every SWAP.

Arity-2 terms are a single GP gate (with SWAPs there and back if needed);
arity-1 terms are local rotations. Local rotations appear in gate lists but
never in counts; a SWAP counts as three GP gates.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import DomainError, RoutingError
from .embedding import Geometry, Position, QubitEmbedding
from .lattice import FHLattice, MappedHamiltonian, PauliTerm, TermKind, jw_transform

logger = logging.getLogger(__name__)

SWAP_GP_COST = 3


class OpKind(Enum):
    GP = "GP"
    SWAP = "SWAP"
    ROTATION = "ROT"


class HubPolicy(Enum):
    """
    How the UMQ hub of a string is chosen.

    FIXED: the middle qubit of a three-qubit string, otherwise the
    lowest-index qubit (the leading X/Y end of a hopping string).
    OPTIMIZED: every qubit of the string is tried and the cheapest kept.
    """
    FIXED = "fixed"
    OPTIMIZED = "optimized"


class SpokeOrder(Enum):
    NEAREST_FIRST = "nearest_first"
    INDEX_ORDER = "index_order"


@dataclass(frozen=True)
class GateOp:
    """One entry of a compiled gate list."""
    kind: OpKind
    qubits: Tuple[Optional[int], ...]
    positions: Tuple[Position, ...]
    diagonal: bool = False

    @property
    def gp_cost(self) -> int:
        return {OpKind.GP: 1, OpKind.SWAP: SWAP_GP_COST}.get(self.kind, 0)

    def __str__(self) -> str:
        return f"{self.kind.value}({','.join('-' if q is None else str(q) for q in self.qubits)})"


@dataclass(frozen=True)
class CompiledTerm:
    """Gate list of one Trotter factor and its GP-equivalent counts."""
    term: PauliTerm
    gate_list: Tuple[GateOp, ...]
    hub: Optional[int] = None

    @property
    def gp_gate_count(self) -> int:
        return sum(op.gp_cost for op in self.gate_list)

    @property
    def diagonal_gp_count(self) -> int:
        return sum(op.gp_cost for op in self.gate_list if op.diagonal)

    @property
    def swap_count(self) -> int:
        return sum(1 for op in self.gate_list if op.kind is OpKind.SWAP)

    @property
    def direct_gp_count(self) -> int:
        return sum(1 for op in self.gate_list if op.kind is OpKind.GP)


# ============================================================================
# ROUTING
# ============================================================================

class _Placement:
    """Mutable qubit <-> position maps used while routing."""

    def __init__(self, emb: QubitEmbedding):
        self.emb = emb
        self.where: Dict[int, Position] = dict(emb.placement)
        self.occupant: Dict[Position, int] = {p: q for q, p in emb.placement.items()}

    def distance(self, a: Position, b: Position) -> int:
        try:
            return self.emb.distances[a][b]
        except KeyError:
            raise RoutingError(f"no path between ions {a} and {b} on embedding '{self.emb.name}'")

    def swap(self, a: Position, b: Position) -> GateOp:
        qa, qb = self.occupant.get(a), self.occupant.get(b)
        for q, p in ((qa, b), (qb, a)):
            if q is not None:
                self.where[q] = p
        self.occupant.pop(a, None)
        self.occupant.pop(b, None)
        if qa is not None:
            self.occupant[b] = qa
        if qb is not None:
            self.occupant[a] = qb
        return GateOp(OpKind.SWAP, (qa, qb), (a, b), QubitEmbedding.is_diagonal_step(a, b))

    def gp(self, qa: int, qb: int) -> GateOp:
        a, b = self.where[qa], self.where[qb]
        if not self.emb.adjacent(a, b):
            raise RoutingError(f"GP({qa},{qb}) on non-adjacent ions {a}, {b}")
        return GateOp(OpKind.GP, (qa, qb), (a, b), QubitEmbedding.is_diagonal_step(a, b))


def _walk_hub(state: _Placement, hub: int, target: int) -> List[GateOp]:
    """SWAP the hub along a shortest path until it sits next to target."""
    ops = []
    goal = state.where[target]
    while state.distance(state.where[hub], goal) > 1:
        here = state.where[hub]
        d = state.distance(here, goal)
        steps = [n for n in state.emb.graph.neighbors(here) if state.distance(n, goal) == d - 1]
        step = min(steps, key=lambda p: (state.occupant.get(p, -1), p))
        ops.append(state.swap(here, step))
    return ops


def route_umq(
    hub: int,
    spokes: Sequence[int],
    emb: QubitEmbedding,
    order: SpokeOrder = SpokeOrder.NEAREST_FIRST,
) -> List[GateOp]:
    """
    Forward UMQ gate list: a GP gate between hub and each spoke.

    Returns:
        GP and SWAP operations in execution order
    """
    state = _Placement(emb)
    ops: List[GateOp] = []
    if order is SpokeOrder.INDEX_ORDER:
        queue = sorted(spokes, key=lambda s: (abs(s - hub), s))
        for spoke in queue:
            ops.extend(_walk_hub(state, hub, spoke))
            ops.append(state.gp(hub, spoke))
        return ops

    remaining = set(spokes)
    while remaining:
        here = state.where[hub]
        spoke = min(remaining, key=lambda s: (state.distance(here, state.where[s]), s))
        ops.extend(_walk_hub(state, hub, spoke))
        ops.append(state.gp(hub, spoke))
        remaining.remove(spoke)
    return ops


def _hub_candidates(term: PauliTerm, policy: HubPolicy) -> List[int]:
    qubits = list(term.qubits)
    if policy is HubPolicy.OPTIMIZED:
        return qubits
    if term.arity == 3:
        return [qubits[1]]
    return [qubits[0]]


def _rotation(q: int, emb: QubitEmbedding) -> GateOp:
    return GateOp(OpKind.ROTATION, (q,), (emb.placement[q],))


def _position_after(ops: Sequence[GateOp], q: int, emb: QubitEmbedding) -> Position:
    """Where qubit q sits once the SWAPs in ops have run."""
    state = _Placement(emb)
    for op in ops:
        if op.kind is OpKind.SWAP:
            state.swap(*op.positions)
    return state.where[q]


# ============================================================================
# COMPILATION
# ============================================================================

def compile_term(
    term: PauliTerm,
    emb: QubitEmbedding,
    hub_policy: HubPolicy = HubPolicy.FIXED,
) -> CompiledTerm:
    """
    Compile one Trotter factor on an embedding.

    Args:
        term: Mapped Pauli term
        emb: Qubit embedding
        hub_policy: Hub choice for UMQ terms

    Returns:
        CompiledTerm whose SWAP schedule restores the original placement

    Raises:
        RoutingError: if a required pair cannot be brought together
    """
    if any(q >= emb.n_qubits for q in term.qubits):
        raise DomainError(f"term {term.label()} acts outside the {emb.n_qubits}-qubit embedding")

    if term.arity == 1:
        return CompiledTerm(term, (_rotation(term.qubits[0], emb),))

    best: Optional[Tuple[Tuple, List[GateOp], int]] = None
    for hub in _hub_candidates(term, hub_policy):
        spokes = [q for q in term.qubits if q != hub]
        for order in SpokeOrder:
            forward = route_umq(hub, spokes, emb, order)
            swaps = sum(op.gp_cost for op in forward if op.kind is OpKind.SWAP)
            gps = sum(op.gp_cost for op in forward if op.kind is OpKind.GP)
            cost = 2 * swaps + gps if term.arity == 2 else 2 * (swaps + gps)
            diag = sum(op.gp_cost for op in forward if op.diagonal)
            key = (cost, diag, hub, order.value)
            if best is None or key < best[0]:
                best = (key, forward, hub)

    _, forward, hub = best
    undo = [op for op in reversed(forward) if op.kind is OpKind.SWAP]

    if term.arity == 2:
        gates = forward + undo
    else:
        basis = [_rotation(q, emb) for q, p in term.factors if p != "Z"]
        backward = list(reversed(forward))
        turn = GateOp(OpKind.ROTATION, (hub,), (_position_after(forward, hub, emb),))
        gates = basis + forward + [turn] + backward + basis
    return CompiledTerm(term, tuple(gates), hub=hub)


def replay_schedule(compiled: CompiledTerm, emb: QubitEmbedding) -> bool:
    """
    Replay a gate list on the embedding.

    Raises:
        RoutingError: if a GP or SWAP acts on non-adjacent ions, a rotation
            names an ion its qubit is not on, or the final placement differs
            from the initial one
    """
    state = _Placement(emb)
    for op in compiled.gate_list:
        if op.kind is OpKind.GP:
            state.gp(*op.qubits)
        elif op.kind is OpKind.SWAP:
            a, b = op.positions
            if {state.occupant.get(a), state.occupant.get(b)} != set(op.qubits):
                raise RoutingError(f"{op}: qubits not on ions {a}, {b}")
            if not emb.adjacent(a, b):
                raise RoutingError(f"{op} on non-adjacent ions {a}, {b}")
            state.swap(a, b)
        elif op.kind is OpKind.ROTATION and state.where[op.qubits[0]] != op.positions[0]:
            raise RoutingError(f"{op}: qubit is on ion {state.where[op.qubits[0]]}, not {op.positions[0]}")
    if state.where != emb.placement:
        raise RoutingError(f"gate list for {compiled.term.label()} does not restore the placement")
    return True


# ============================================================================
# TROTTER-STEP CENSUS
# ============================================================================

CENSUS_BUCKETS = {
    TermKind.ONSITE_ZZ: "two_body",
    TermKind.ROW_HOP: "three_body",
    TermKind.COLUMN_HOP: "eleven_body",
}


@dataclass(frozen=True)
class TrotterCensus:
    """GP-equivalent gate counts for one Trotter step."""
    two_body: int
    three_body: int
    eleven_body: int
    total: int
    diagonal_ops: int
    swaps: int
    term_counts: Dict[str, int] = field(default_factory=dict)
    embedding_name: str = ""
    geometry: str = ""
    hub_policy: str = HubPolicy.FIXED.value

    def decomposition(self) -> Dict[str, Dict[str, int]]:
        """Terms and gates per bucket (column hops fill the eleven_body bucket)."""
        return {
            "two_body": {"terms": self.term_counts.get("two_body", 0), "gates": self.two_body},
            "three_body": {"terms": self.term_counts.get("three_body", 0), "gates": self.three_body},
            "eleven_body": {"terms": self.term_counts.get("eleven_body", 0), "gates": self.eleven_body},
        }

    def to_dict(self) -> Dict:
        return {
            "two_body": self.two_body,
            "three_body": self.three_body,
            "eleven_body": self.eleven_body,
            "total": self.total,
            "diagonal_ops": self.diagonal_ops,
            "swaps": self.swaps,
            "term_counts": dict(self.term_counts),
            "embedding": self.embedding_name,
            "geometry": self.geometry,
            "hub_policy": self.hub_policy,
        }


def compile_hamiltonian(
    mapped: MappedHamiltonian,
    emb: QubitEmbedding,
    hub_policy: HubPolicy = HubPolicy.FIXED,
) -> List[CompiledTerm]:
    if emb.n_qubits != mapped.n_qubits:
        raise DomainError(f"embedding places {emb.n_qubits} qubits, Hamiltonian needs {mapped.n_qubits}")
    return [compile_term(term, emb, hub_policy) for term in mapped]


def count_trotter_step(
    lat: FHLattice,
    emb: QubitEmbedding,
    hub_policy: HubPolicy = HubPolicy.FIXED,
) -> TrotterCensus:
    """
    Sum compiled gate counts over every term of one Trotter step.

    Returns:
        TrotterCensus (GP-equivalents; SWAP = 3)
    """
    compiled = compile_hamiltonian(jw_transform(lat), emb, hub_policy)
    gates: Dict[str, int] = defaultdict(int)
    terms: Dict[str, int] = defaultdict(int)
    diagonal = swaps = 0
    for item in compiled:
        bucket = CENSUS_BUCKETS.get(item.term.kind)
        if bucket is None:
            continue
        gates[bucket] += item.gp_gate_count
        terms[bucket] += 1
        diagonal += item.diagonal_gp_count
        swaps += item.swap_count

    census = TrotterCensus(
        two_body=gates["two_body"],
        three_body=gates["three_body"],
        eleven_body=gates["eleven_body"],
        total=sum(gates.values()),
        diagonal_ops=diagonal,
        swaps=swaps,
        term_counts=dict(terms),
        embedding_name=emb.name,
        geometry=emb.geometry.value,
        hub_policy=hub_policy.value,
    )
    logger.info("Census on %s: total %d (%d swaps, %d diagonal)", emb.name, census.total, swaps, diagonal)
    return census


def _factor_pairs(n: int) -> List[Tuple[int, int]]:
    return [(r, n // r) for r in range(2, n // 2 + 1) if n % r == 0]


def search_embedding(
    lat: FHLattice,
    hub_policy: HubPolicy = HubPolicy.FIXED,
    candidates: Optional[Sequence[QubitEmbedding]] = None,
) -> Tuple[QubitEmbedding, TrotterCensus]:
    """
    Pick the cheapest embedding among snake placements.

    Candidates default to row- and column-major snakes over every grid
    factorization of the qubit count. Only embeddings on which the on-site
    and row-hopping terms need no SWAPs are kept when any exist.

    Returns:
        (embedding, census) with the lowest total, then fewest diagonal ops
    """
    if candidates is None:
        candidates = [
            QubitEmbedding.snake(lat.n_qubits, r, c, column_major=major)
            for r, c in _factor_pairs(lat.n_qubits)
            for major in (True, False)
        ]
    if not candidates:
        raise DomainError("no candidate embeddings")

    mapped = jw_transform(lat)
    floor_two = len(mapped.of_kind(TermKind.ONSITE_ZZ))
    floor_three = 4 * len(mapped.of_kind(TermKind.ROW_HOP))

    scored = []
    for emb in candidates:
        census = count_trotter_step(lat, emb, hub_policy)
        clean = census.two_body == floor_two and census.three_body == floor_three
        scored.append((not clean, census.total, census.diagonal_ops, emb.name, emb, census))
    scored.sort(key=lambda item: item[:4])
    _, _, _, _, emb, census = scored[0]
    logger.info("Embedding search: %s wins with %d gates", emb.name, census.total)
    return emb, census


def print_census_summary(census: TrotterCensus, reference_total: Optional[int] = None) -> None:
    print(f"\n📊 Gates per Trotter step on {census.embedding_name or census.geometry} "
          f"(hub policy: {census.hub_policy})")
    for bucket, row in census.decomposition().items():
        print(f"   {bucket:<12} {row['terms']:>4} terms  {row['gates']:>6} gates")
    print(f"   {'total':<12} {'':>10} {census.total:>6} gates "
          f"({census.swaps} SWAPs, {census.diagonal_ops} diagonal)")
    if reference_total is not None:
        print(f"   reference    {reference_total:>17} gates")

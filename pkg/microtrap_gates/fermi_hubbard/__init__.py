"""
Fermi-Hubbard gate budget.

Maps the lattice Hamiltonian to Pauli strings, compiles each Trotter factor
into GP gates and SWAPs on a qubit embedding, counts gates per Trotter step,
and checks the Trotterization on lattices small enough for dense matrices.
"""

from .compiler import (
    CompiledTerm,
    GateOp,
    HubPolicy,
    OpKind,
    SpokeOrder,
    TrotterCensus,
    compile_hamiltonian,
    compile_term,
    count_trotter_step,
    print_census_summary,
    replay_schedule,
    route_umq,
    search_embedding,
)
from .embedding import Geometry, QubitEmbedding, embedding_from_json, load_embedding
from .feasibility import FeasibilityReport, feasibility_report, print_feasibility_summary
from .lattice import FHLattice, MappedHamiltonian, Normalization, PauliTerm, TermKind, jw_transform
from .operators import anticommutation_deviation, fermionic_hamiltonian_dense, jw_annihilation, pauli_matrix
from .trotter import (
    TROTTER_CSV_HEADER,
    TrotterRow,
    TrotterVerification,
    hermiticity_deviation,
    mapping_deviation,
    print_trotter_summary,
    trotter_verify_small,
)

__all__ = [
    "CompiledTerm",
    "FHLattice",
    "FeasibilityReport",
    "GateOp",
    "Geometry",
    "HubPolicy",
    "MappedHamiltonian",
    "Normalization",
    "OpKind",
    "PauliTerm",
    "QubitEmbedding",
    "SpokeOrder",
    "TROTTER_CSV_HEADER",
    "TermKind",
    "TrotterCensus",
    "TrotterRow",
    "TrotterVerification",
    "anticommutation_deviation",
    "compile_hamiltonian",
    "compile_term",
    "count_trotter_step",
    "embedding_from_json",
    "feasibility_report",
    "fermionic_hamiltonian_dense",
    "hermiticity_deviation",
    "jw_annihilation",
    "jw_transform",
    "load_embedding",
    "mapping_deviation",
    "pauli_matrix",
    "print_census_summary",
    "print_feasibility_summary",
    "print_trotter_summary",
    "replay_schedule",
    "route_umq",
    "search_embedding",
]

"""
Dense operator helpers for small instances (verification only).
"""

from functools import reduce
from typing import Dict, Iterable, Tuple

import numpy as np

from ..errors import UnsupportedSizeError
from .lattice import FHLattice, MappedHamiltonian, PauliTerm

MAX_DENSE_QUBITS = 12

PAULI: Dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# |0> occupied: sigma+ = |0><1| creates, sigma- = |1><0| annihilates
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()


def _check_size(n_qubits: int) -> None:
    if n_qubits > MAX_DENSE_QUBITS:
        raise UnsupportedSizeError(f"{n_qubits} qubits exceed the dense limit of {MAX_DENSE_QUBITS}")


def kron_all(ops: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, ops, np.eye(1, dtype=complex))


def pauli_matrix(factors: Iterable[Tuple[int, str]], n_qubits: int) -> np.ndarray:
    """Dense tensor product with qubit 0 as the most significant factor."""
    _check_size(n_qubits)
    letters = ["I"] * n_qubits
    for q, p in factors:
        letters[q] = p
    return kron_all(PAULI[p] for p in letters)


def term_matrix(term: PauliTerm, n_qubits: int) -> np.ndarray:
    return term.coefficient * pauli_matrix(term.factors, n_qubits)


def hamiltonian_dense(mapped: MappedHamiltonian) -> np.ndarray:
    """Sum of all terms plus the identity constant."""
    n = mapped.n_qubits
    _check_size(n)
    h = mapped.constant * np.eye(2 ** n, dtype=complex)
    for term in mapped:
        h += term_matrix(term, n)
    return h


def pauli_exponential(term: PauliTerm, time: float, n_qubits: int) -> np.ndarray:
    """exp(-i c t P) = cos(ct) I - i sin(ct) P, using P^2 = I."""
    theta = term.coefficient * time
    p = pauli_matrix(term.factors, n_qubits)
    return np.cos(theta) * np.eye(2 ** n_qubits, dtype=complex) - 1j * np.sin(theta) * p


def jw_annihilation(j: int, n_modes: int) -> np.ndarray:
    """b_j = -(Z_0 ... Z_{j-1}) sigma-_j."""
    _check_size(n_modes)
    ops = [PAULI["Z"]] * j + [SIGMA_MINUS] + [PAULI["I"]] * (n_modes - j - 1)
    return -kron_all(ops)


def anticommutation_deviation(n_modes: int) -> float:
    """max |{b_j, b_k+} - delta_jk| and max |{b_j, b_k}| over all mode pairs."""
    b = [jw_annihilation(j, n_modes) for j in range(n_modes)]
    identity = np.eye(2 ** n_modes, dtype=complex)
    worst = 0.0
    for j in range(n_modes):
        for k in range(n_modes):
            mixed = b[j] @ b[k].conj().T + b[k].conj().T @ b[j]
            same = b[j] @ b[k] + b[k] @ b[j]
            target = identity if j == k else 0.0
            worst = max(worst, float(np.abs(mixed - target).max()), float(np.abs(same).max()))
    return worst


def fermionic_hamiltonian_dense(lat: FHLattice) -> np.ndarray:
    """The lattice Hamiltonian built directly from JW fermion matrices."""
    n = lat.n_qubits
    _check_size(n)
    b = [jw_annihilation(j, n) for j in range(n)]
    bd = [op.conj().T for op in b]
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i, j in lat.row_bonds() + lat.column_bonds():
        for up in (True, False):
            a, c = lat.qubit(i, up), lat.qubit(j, up)
            h += lat.hopping_w * (bd[a] @ b[c] + bd[c] @ b[a])
    for s in range(lat.n_sites):
        up, down = lat.qubit(s, True), lat.qubit(s, False)
        h += lat.onsite_U * (bd[up] @ b[up]) @ (bd[down] @ b[down])
    return h

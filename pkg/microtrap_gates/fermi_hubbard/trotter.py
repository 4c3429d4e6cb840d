"""
First-order Trotter verification on tiny lattices.

The exact propagator exp(-iHt) is compared in operator 2-norm against
(prod_j exp(-i c_j P_j t/n))^n, with the factors applied in
jw_transform order and the identity constant carried as a global phase.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from ..errors import DomainError, UnsupportedSizeError
from .lattice import FHLattice, Normalization, jw_transform
from .operators import hamiltonian_dense, pauli_exponential

logger = logging.getLogger(__name__)

MAX_VERIFY_QUBITS = 10
DEFAULT_STEPS = (8, 16, 32, 64)

TROTTER_CSV_HEADER = ["n", "error"]


@dataclass(frozen=True)
class TrotterRow:
    n: int
    error: float


@dataclass(frozen=True)
class TrotterVerification:
    """Error per step count and the ratio between successive rows."""
    rows: List[TrotterRow]
    time: float

    @property
    def ratios(self) -> List[Optional[float]]:
        out: List[Optional[float]] = []
        for prev, cur in zip(self.rows, self.rows[1:]):
            out.append(cur.error / prev.error if prev.error > 0 else None)
        return out

    def to_csv_rows(self) -> List[list]:
        return [[row.n, row.error] for row in self.rows]


def trotter_verify_small(
    lat: FHLattice,
    time: float,
    steps: Sequence[int] = DEFAULT_STEPS,
    normalization: Normalization = Normalization.PHYSICAL,
) -> TrotterVerification:
    """
    Trotter error for each step count.

    Args:
        lat: Lattice with at most 10 qubits (2x2 or smaller)
        time: Evolution time
        steps: Step counts n
        normalization: Coefficient normalization of the mapped terms

    Returns:
        TrotterVerification with rows in the order of `steps`

    Raises:
        UnsupportedSizeError: for more than 10 qubits
    """
    if lat.n_qubits > MAX_VERIFY_QUBITS:
        raise UnsupportedSizeError(f"{lat.n_qubits} qubits exceed the verifier limit of {MAX_VERIFY_QUBITS}")
    if any(int(n) < 1 for n in steps):
        raise DomainError("Trotter step counts must be positive")

    mapped = jw_transform(lat, normalization)
    dim = 2 ** mapped.n_qubits
    exact = expm(-1j * time * hamiltonian_dense(mapped))

    rows = []
    for n in steps:
        n = int(n)
        dt = time / n
        step = np.exp(-1j * mapped.constant * dt) * np.eye(dim, dtype=complex)
        for term in mapped:
            step = pauli_exponential(term, dt, mapped.n_qubits) @ step
        product = np.linalg.matrix_power(step, n)
        error = float(np.linalg.norm(exact - product, 2))
        rows.append(TrotterRow(n=n, error=error))
        logger.debug("Trotter n=%d: error %.3e", n, error)
    return TrotterVerification(rows=rows, time=time)


def hermiticity_deviation(lat: FHLattice, normalization: Normalization = Normalization.PHYSICAL) -> float:
    h = hamiltonian_dense(jw_transform(lat, normalization))
    return float(np.abs(h - h.conj().T).max())


def mapping_deviation(lat: FHLattice) -> float:
    """max |H_pauli - H_fermion| entrywise, PHYSICAL normalization."""
    from .operators import fermionic_hamiltonian_dense
    return float(np.abs(hamiltonian_dense(jw_transform(lat)) - fermionic_hamiltonian_dense(lat)).max())


def print_trotter_summary(result: TrotterVerification) -> None:
    print(f"\n📊 First-order Trotter error at t={result.time}")
    ratios = [None] + result.ratios
    for row, ratio in zip(result.rows, ratios):
        tail = f"   ratio {ratio:.3f}" if ratio is not None else ""
        print(f"   n={row.n:>4}  error {row.error:.3e}{tail}")

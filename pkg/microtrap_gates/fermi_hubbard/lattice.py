"""
Fermi-Hubbard Lattice and Jordan-Wigner Mapping

H = w sum_{<i,j>, s} (b+_{i,s} b_{j,s} + h.c.) + U sum_j n_{j,up} n_{j,down}

on a rows x cols site grid, sites numbered row-major (site = row * cols + col).
Spin modes are interleaved, 0-based: qubit 2*site + 1 carries spin up and
qubit 2*site carries spin down, so row neighbours give three-qubit strings
and column neighbours give strings of length 2*cols + 1.

Qubit convention: |0> is the occupied state, sigma+ = |0><1|, and
b_j = -(Z_0 ... Z_{j-1}) sigma-_j. Then n_j = (1 + Z_j)/2 and each hopping
bond maps to -(w/2)(X Z...Z X + Y Z...Z Y).
"""

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Tuple

from ..errors import DomainError

PAULI_LETTERS = ("X", "Y", "Z")


class TermKind(Enum):
    """Origin of a mapped Pauli term."""
    ONSITE_ZZ = "onsite_zz"
    NUMBER_Z = "number_z"
    ROW_HOP = "row_hop"
    COLUMN_HOP = "column_hop"


class Normalization(Enum):
    """
    Coefficient normalization.

    PHYSICAL keeps w/2 and U/4; RESCALED applies w -> 2w and U -> 4U so the
    hopping and on-site coefficients read w and U.
    """
    PHYSICAL = "physical"
    RESCALED = "rescaled"

    def scales(self) -> Tuple[float, float]:
        """(hopping scale, on-site scale) applied to w and U."""
        return (2.0, 4.0) if self is Normalization.RESCALED else (1.0, 1.0)


# ============================================================================
# LATTICE
# ============================================================================

@dataclass(frozen=True)
class FHLattice:
    """Site grid and couplings. The default is five sites per row, four rows."""
    rows: int = 4
    cols: int = 5
    hopping_w: float = 1.0
    onsite_U: float = 1.0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError(f"lattice dimensions must be positive, got {self.rows}x{self.cols}")
        for name in ("hopping_w", "onsite_U"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def n_sites(self) -> int:
        return self.rows * self.cols

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_sites

    def site(self, row: int, col: int) -> int:
        return row * self.cols + col

    @staticmethod
    def qubit(site: int, spin_up: bool) -> int:
        return 2 * site + (1 if spin_up else 0)

    def row_bonds(self) -> List[Tuple[int, int]]:
        return [(self.site(r, c), self.site(r, c + 1)) for r in range(self.rows) for c in range(self.cols - 1)]

    def column_bonds(self) -> List[Tuple[int, int]]:
        return [(self.site(r, c), self.site(r + 1, c)) for r in range(self.rows - 1) for c in range(self.cols)]


# ============================================================================
# PAULI TERMS
# ============================================================================

@dataclass(frozen=True)
class PauliTerm:
    """Real coefficient times a tensor product of X/Y/Z factors."""
    coefficient: float
    factors: Tuple[Tuple[int, str], ...]
    kind: TermKind

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise DomainError("Pauli coefficient must be real and finite")
        ordered = tuple(sorted((int(q), str(p)) for q, p in self.factors))
        qubits = [q for q, _ in ordered]
        if len(set(qubits)) != len(qubits):
            raise DomainError(f"repeated qubit in Pauli term {ordered}")
        if any(p not in PAULI_LETTERS for _, p in ordered):
            raise DomainError(f"Pauli factors must be X, Y or Z, got {ordered}")
        object.__setattr__(self, "factors", ordered)

    @property
    def arity(self) -> int:
        return len(self.factors)

    @property
    def qubits(self) -> Tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    def label(self) -> str:
        return " ".join(f"{p}{q}" for q, p in self.factors)

    def to_dict(self) -> Dict:
        return {"coefficient": self.coefficient, "pauli": self.label(), "kind": self.kind.value, "arity": self.arity}


def _hopping_terms(i: int, j: int, coefficient: float, kind: TermKind) -> List[PauliTerm]:
    lo, hi = min(i, j), max(i, j)
    tail = tuple((k, "Z") for k in range(lo + 1, hi))
    return [
        PauliTerm(coefficient, ((lo, letter),) + tail + ((hi, letter),), kind)
        for letter in ("X", "Y")
    ]


@dataclass(frozen=True)
class MappedHamiltonian:
    """Pauli terms plus the identity coefficient, in Trotter order."""
    lattice: FHLattice
    terms: Tuple[PauliTerm, ...]
    constant: float
    normalization: Normalization

    @property
    def n_qubits(self) -> int:
        return self.lattice.n_qubits

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def census(self) -> Dict[str, int]:
        """Number of terms per TermKind."""
        counts = Counter(t.kind for t in self.terms)
        return {kind.value: counts.get(kind, 0) for kind in TermKind}

    def arity_census(self) -> Dict[int, int]:
        return dict(sorted(Counter(t.arity for t in self.terms).items()))

    def of_kind(self, kind: TermKind) -> List[PauliTerm]:
        return [t for t in self.terms if t.kind is kind]

    def to_dense(self):
        """Dense matrix (small lattices only)."""
        from .operators import hamiltonian_dense
        return hamiltonian_dense(self)

    def to_dict(self) -> Dict:
        return {
            "lattice": {"rows": self.lattice.rows, "cols": self.lattice.cols,
                        "hopping_w": self.lattice.hopping_w, "onsite_U": self.lattice.onsite_U},
            "normalization": self.normalization.value,
            "constant": self.constant,
            "census": self.census(),
            "terms": [t.to_dict() for t in self.terms],
        }


def jw_transform(lat: FHLattice, normalization: Normalization = Normalization.PHYSICAL) -> MappedHamiltonian:
    """
    Jordan-Wigner map of the lattice Hamiltonian.

    Terms come out in a fixed order: on-site ZZ by site, number Z by qubit,
    row hops by (bond, spin, X/Y), then column hops likewise.

    Args:
        lat: Lattice
        normalization: PHYSICAL or RESCALED coefficients

    Returns:
        MappedHamiltonian
    """
    hop_scale, onsite_scale = normalization.scales()
    w = lat.hopping_w * hop_scale
    u = lat.onsite_U * onsite_scale

    terms: List[PauliTerm] = []
    for s in range(lat.n_sites):
        terms.append(PauliTerm(u / 4.0, ((lat.qubit(s, False), "Z"), (lat.qubit(s, True), "Z")), TermKind.ONSITE_ZZ))
    for q in range(lat.n_qubits):
        terms.append(PauliTerm(u / 4.0, ((q, "Z"),), TermKind.NUMBER_Z))
    for kind, bonds in ((TermKind.ROW_HOP, lat.row_bonds()), (TermKind.COLUMN_HOP, lat.column_bonds())):
        for a, b in bonds:
            for up in (True, False):
                terms.extend(_hopping_terms(lat.qubit(a, up), lat.qubit(b, up), -w / 2.0, kind))

    return MappedHamiltonian(
        lattice=lat,
        terms=tuple(terms),
        constant=lat.n_sites * u / 4.0,
        normalization=normalization,
    )

"""
Qubit Embeddings

A QubitEmbedding places every qubit on one ion: a site of a rows x cols
microtrap grid or a position along a 1D chain. Connectivity is a networkx
graph over positions: nearest neighbours, plus diagonal neighbours on the
grid when diagonal gates are enabled.

JSON form: {"<qubit>": [row, col], ...}
"""

import json
import logging
import os
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Optional, Tuple

import networkx as nx

from ..errors import DomainError, SchemaError
from .lattice import FHLattice

logger = logging.getLogger(__name__)

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")
DEFAULT_GRID_FIXTURE = "fh_embedding_5x4_default.json"

Position = Tuple[int, int]


class Geometry(Enum):
    """Ion arrangement."""
    GRID_2D = "grid"
    CHAIN_1D = "chain"


@dataclass(frozen=True, eq=False)
class QubitEmbedding:
    """
    Bijection from qubit index to ion position.

    Chain positions are (0, k). Instances are immutable; routing works on
    copies of the placement.
    """
    placement: Dict[int, Position]
    geometry: Geometry
    rows: int
    cols: int
    diagonal: bool = True
    name: str = ""

    def __post_init__(self):
        placement = {int(q): (int(p[0]), int(p[1])) for q, p in self.placement.items()}
        n = len(placement)
        if sorted(placement) != list(range(n)):
            raise DomainError(f"embedding must place qubits 0..{n - 1} exactly once")
        if len(set(placement.values())) != n:
            raise DomainError("two qubits placed on the same ion")
        if self.geometry is Geometry.CHAIN_1D and self.rows != 1:
            raise DomainError("chain embeddings have a single row")
        for q, (r, c) in placement.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise DomainError(f"qubit {q} at {(r, c)} outside {self.rows}x{self.cols} grid")
        object.__setattr__(self, "placement", placement)

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def chain(cls, n_qubits: int) -> "QubitEmbedding":
        """Qubits in index order along a linear chain."""
        return cls({q: (0, q) for q in range(n_qubits)}, Geometry.CHAIN_1D, 1, n_qubits,
                   diagonal=False, name="chain")

    @classmethod
    def snake(
        cls,
        n_qubits: int,
        rows: int,
        cols: int,
        column_major: bool = True,
        diagonal: bool = True,
    ) -> "QubitEmbedding":
        """
        Boustrophedon placement: consecutive qubits are always neighbours.

        column_major walks down the first column, up the second, and so on;
        otherwise rows are walked left-right, right-left.
        """
        if rows * cols < n_qubits:
            raise DomainError(f"{rows}x{cols} grid cannot hold {n_qubits} qubits")
        placement = {}
        for q in range(n_qubits):
            if column_major:
                c, r = divmod(q, rows)
                r = r if c % 2 == 0 else rows - 1 - r
            else:
                r, c = divmod(q, cols)
                c = c if r % 2 == 0 else cols - 1 - c
            placement[q] = (r, c)
        order = "col" if column_major else "row"
        return cls(placement, Geometry.GRID_2D, rows, cols, diagonal=diagonal,
                   name=f"snake-{order}-{rows}x{cols}")

    @classmethod
    def default_grid(cls, lat: Optional[FHLattice] = None) -> "QubitEmbedding":
        """
        Shipped default for the 5x4 lattice (8 x 5 grid, column-major snake);
        other lattices get the equivalent snake with 2*rows grid rows.
        """
        lat = lat or FHLattice()
        if (lat.rows, lat.cols) == (4, 5):
            return load_embedding(os.path.join(FIXTURE_DIR, DEFAULT_GRID_FIXTURE), name="default")
        return cls.snake(lat.n_qubits, 2 * lat.rows, lat.cols)

    # ------------------------------------------------------------------
    # Connectivity
    # ------------------------------------------------------------------

    @property
    def n_qubits(self) -> int:
        return len(self.placement)

    @cached_property
    def graph(self) -> nx.Graph:
        """Connectivity over ion positions."""
        if self.geometry is Geometry.CHAIN_1D:
            g = nx.path_graph(self.cols)
            return nx.relabel_nodes(g, {k: (0, k) for k in range(self.cols)})
        g = nx.grid_2d_graph(self.rows, self.cols)
        if self.diagonal:
            for r in range(self.rows - 1):
                for c in range(self.cols):
                    if c + 1 < self.cols:
                        g.add_edge((r, c), (r + 1, c + 1))
                    if c >= 1:
                        g.add_edge((r, c), (r + 1, c - 1))
        return g

    @cached_property
    def distances(self) -> Dict[Position, Dict[Position, int]]:
        return dict(nx.all_pairs_shortest_path_length(self.graph))

    def adjacent(self, a: Position, b: Position) -> bool:
        return self.graph.has_edge(a, b)

    @staticmethod
    def is_diagonal_step(a: Position, b: Position) -> bool:
        return a[0] != b[0] and a[1] != b[1]

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        return {str(q): list(self.placement[q]) for q in range(self.n_qubits)}


def embedding_from_json(
    data: Any,
    geometry: Geometry = Geometry.GRID_2D,
    diagonal: bool = True,
    name: str = "",
) -> QubitEmbedding:
    """Parse {qubit: [row, col]}; grid dimensions are the bounding box."""
    if not isinstance(data, dict) or not data:
        raise SchemaError("embedding", "expected a non-empty JSON object")
    placement = {}
    for key, value in data.items():
        try:
            qubit = int(key)
        except ValueError:
            raise SchemaError(str(key), "qubit keys must be integers")
        if (not isinstance(value, list) or len(value) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)):
            raise SchemaError(str(key), "position must be [row, col] integers")
        placement[qubit] = (value[0], value[1])
    rows = max(r for r, _ in placement.values()) + 1
    cols = max(c for _, c in placement.values()) + 1
    if geometry is Geometry.CHAIN_1D and rows != 1:
        raise SchemaError("embedding", "chain embeddings must use row 0 only")
    try:
        return QubitEmbedding(placement, geometry, rows, cols, diagonal=diagonal, name=name)
    except DomainError as e:
        raise SchemaError("embedding", str(e))


def load_embedding(path: str, geometry: Geometry = Geometry.GRID_2D, diagonal: bool = True,
                   name: str = "") -> QubitEmbedding:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except OSError as e:
        raise SchemaError("embedding", f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise SchemaError("embedding", f"invalid JSON in {path}: {e}")
    return embedding_from_json(data, geometry, diagonal, name=name or os.path.basename(path))

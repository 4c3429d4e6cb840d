"""
Tests for the Fermi-Hubbard Lattice, Jordan-Wigner Mapping and Embeddings
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from microtrap_gates.errors import DomainError, SchemaError, UnsupportedSizeError
from microtrap_gates.fermi_hubbard import (
    FHLattice,
    Geometry,
    Normalization,
    PauliTerm,
    QubitEmbedding,
    TermKind,
    anticommutation_deviation,
    embedding_from_json,
    jw_transform,
    pauli_matrix,
)
from microtrap_gates.fermi_hubbard.trotter import hermiticity_deviation, mapping_deviation


# ============================================================================
# MAPPING TESTS
# ============================================================================

class TestJordanWigner:
    """Pauli strings of the mapped Hamiltonian."""

    def test_default_census(self):
        """5x4 lattice: 20 on-site, 64 row-hop and 60 column-hop strings."""
        mapped = jw_transform(FHLattice())
        census = mapped.census()
        assert census["onsite_zz"] == 20
        assert census["row_hop"] == 64
        assert census["column_hop"] == 60
        assert census["number_z"] == 40
        assert mapped.n_qubits == 40

    def test_arities(self):
        """Row hops are three-qubit strings, column hops eleven-qubit strings."""
        mapped = jw_transform(FHLattice())
        assert {t.arity for t in mapped.of_kind(TermKind.ROW_HOP)} == {3}
        assert {t.arity for t in mapped.of_kind(TermKind.COLUMN_HOP)} == {11}
        assert {t.arity for t in mapped.of_kind(TermKind.ONSITE_ZZ)} == {2}
        assert mapped.arity_census() == {1: 40, 2: 20, 3: 64, 11: 60}

    def test_hopping_string_shape(self):
        """X Z X and Y Z Y between qubits two apart, coefficient -w/2."""
        lat = FHLattice(rows=1, cols=2, hopping_w=0.6)
        hops = jw_transform(lat).of_kind(TermKind.ROW_HOP)
        labels = sorted(t.label() for t in hops)
        assert "X1 Z2 X3" in labels and "Y0 Z1 Y2" in labels
        assert all(t.coefficient == pytest.approx(-0.3) for t in hops)

    def test_rescaled_normalization(self):
        """RESCALED reads w and U off the coefficients."""
        lat = FHLattice(rows=1, cols=2, hopping_w=0.6, onsite_U=2.0)
        mapped = jw_transform(lat, Normalization.RESCALED)
        assert mapped.of_kind(TermKind.ROW_HOP)[0].coefficient == pytest.approx(-0.6)
        assert mapped.of_kind(TermKind.ONSITE_ZZ)[0].coefficient == pytest.approx(2.0)

    def test_single_site_has_no_hops(self):
        mapped = jw_transform(FHLattice(rows=1, cols=1))
        assert mapped.census()["row_hop"] == mapped.census()["column_hop"] == 0

    def test_to_dict(self):
        data = jw_transform(FHLattice(rows=1, cols=2)).to_dict()
        assert data["normalization"] == "physical"
        assert len(data["terms"]) == data["census"]["onsite_zz"] + data["census"]["number_z"] + 4

    def test_invalid_terms(self):
        with pytest.raises(DomainError):
            PauliTerm(1.0, ((0, "X"), (0, "Z")), TermKind.ROW_HOP)
        with pytest.raises(DomainError):
            PauliTerm(1.0, ((0, "W"),), TermKind.NUMBER_Z)
        with pytest.raises(DomainError):
            FHLattice(rows=0)


# ============================================================================
# DENSE CHECKS
# ============================================================================

class TestDenseOperators:
    """Small-lattice matrix checks."""

    def test_anticommutation(self):
        assert anticommutation_deviation(4) < 1e-12

    def test_hermitian(self):
        assert hermiticity_deviation(FHLattice(rows=2, cols=2, hopping_w=0.7, onsite_U=1.3)) < 1e-12

    @pytest.mark.parametrize("rows,cols", [(1, 2), (2, 1), (2, 2)])
    def test_pauli_form_equals_fermion_form(self, rows, cols):
        lat = FHLattice(rows=rows, cols=cols, hopping_w=0.7, onsite_U=1.3)
        assert mapping_deviation(lat) < 1e-12

    def test_qubit_zero_most_significant(self):
        z0 = pauli_matrix([(0, "Z")], 2)
        assert np.allclose(np.diag(z0), [1, 1, -1, -1])

    def test_dense_limit(self):
        with pytest.raises(UnsupportedSizeError):
            jw_transform(FHLattice(rows=2, cols=4)).to_dense()


# ============================================================================
# EMBEDDING TESTS
# ============================================================================

class TestEmbeddings:
    """Qubit placements and connectivity."""

    def test_chain(self):
        emb = QubitEmbedding.chain(6)
        assert emb.geometry is Geometry.CHAIN_1D
        assert emb.adjacent((0, 2), (0, 3))
        assert not emb.adjacent((0, 2), (0, 4))
        assert emb.distances[(0, 0)][(0, 5)] == 5

    def test_snake_neighbours(self):
        """Consecutive qubits of a snake are always adjacent."""
        for major in (True, False):
            emb = QubitEmbedding.snake(40, 8, 5, column_major=major, diagonal=False)
            for q in range(39):
                assert emb.adjacent(emb.placement[q], emb.placement[q + 1])

    def test_diagonal_edges(self):
        with_diag = QubitEmbedding.snake(4, 2, 2)
        without = QubitEmbedding.snake(4, 2, 2, diagonal=False)
        assert with_diag.adjacent((0, 0), (1, 1))
        assert not without.adjacent((0, 0), (1, 1))

    def test_default_grid_fixture(self):
        emb = QubitEmbedding.default_grid()
        assert emb.n_qubits == 40
        assert (emb.rows, emb.cols) == (8, 5)
        assert emb.name == "default"

    def test_json_roundtrip_and_errors(self):
        emb = QubitEmbedding.snake(6, 2, 3)
        again = embedding_from_json(emb.to_json())
        assert again.placement == emb.placement
        with pytest.raises(SchemaError):
            embedding_from_json({"0": [0, 0], "1": [0, 0]})
        with pytest.raises(SchemaError):
            embedding_from_json({"a": [0, 0]})
        with pytest.raises(SchemaError):
            embedding_from_json({"0": [0, 0], "1": [1, 0]}, geometry=Geometry.CHAIN_1D)

    def test_snake_too_small(self):
        with pytest.raises(DomainError):
            QubitEmbedding.snake(10, 2, 3)

"""
Tests for Array Scaling

Covers bond orbits under the square's symmetries, donor embedding and the
position sweep over N x N arrays.
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from microtrap_gates.errors import DomainError, UnsupportedSizeError
from microtrap_gates.gates import PulseSequence, infidelity
from microtrap_gates.optimization import RestartExecutor
from microtrap_gates.scaling import (
    SCALING_CSV_HEADER,
    bond_orbits,
    calibrated_base_array,
    embed_donor,
    grid_bonds,
    position_sweep,
    scale_infidelity,
    worst_by_size,
)


# ============================================================================
# ORBIT TESTS
# ============================================================================

class TestBondOrbits:
    """Symmetry classes of bonds."""

    def test_cell_has_one_orbit(self):
        assert len(bond_orbits(2)) == 1
        assert bond_orbits(2)[0].size == 4
        assert len(bond_orbits(2, diagonal=True)) == 1
        assert bond_orbits(2, diagonal=True)[0].size == 2

    def test_4x4_nearest_neighbour(self):
        """24 bonds fall into four orbits."""
        orbits = bond_orbits(4)
        assert len(orbits) == 4
        assert sum(o.size for o in orbits) == len(grid_bonds(4)) == 24
        assert sorted(o.size for o in orbits) == [4, 4, 8, 8]
        assert {o.kind for o in orbits} == {"edge", "intermediate", "center"}

    def test_orbits_partition_bonds(self):
        for n in (3, 5, 6):
            for diagonal in (False, True):
                members = [b for o in bond_orbits(n, diagonal) for b in o.members]
                assert sorted(members) == grid_bonds(n, diagonal)

    def test_labels(self):
        orbit = bond_orbits(3)[0]
        assert orbit.label == "edge[0,0|0,1]"

    def test_too_small(self):
        with pytest.raises(DomainError):
            bond_orbits(1)


# ============================================================================
# EMBEDDING TESTS
# ============================================================================

class TestEmbedding:
    """Donor placed into larger arrays."""

    def test_cell_reproduces_donor(self, cell_array, cell_ctx, example1):
        """N = 2 is the donor's own array."""
        gate = embed_donor(2, example1, cell_array)
        assert scale_infidelity(gate).infidelity == pytest.approx(
            infidelity(example1, cell_ctx).infidelity, rel=1e-10)

    def test_all_modes_enter(self, cell_array, example1):
        metrics = scale_infidelity(embed_donor(3, example1, cell_array))
        assert len(metrics.delta_alpha) == 18

    def test_symmetric_bonds_agree(self, cell_array, example1):
        """Every member of an orbit gives the same infidelity."""
        base = calibrated_base_array(example1, cell_array)
        for orbit in bond_orbits(3):
            values = [scale_infidelity(embed_donor(3, example1, base, bond)).infidelity for bond in orbit.members]
            assert max(values) == pytest.approx(min(values), rel=1e-6, abs=1e-14), orbit.label

    def test_non_neighbours_rejected(self, cell_array, example1):
        with pytest.raises(DomainError):
            embed_donor(3, example1, cell_array, ((0, 0), (0, 2)))

    def test_diagonal_flag(self, cell_array, example1):
        assert embed_donor(3, example1, cell_array, ((0, 0), (1, 1))).is_diagonal
        assert not embed_donor(3, example1, cell_array).is_diagonal


# ============================================================================
# SWEEP TESTS
# ============================================================================

class TestPositionSweep:
    """Donor infidelity over array sizes."""

    def test_rows_per_orbit(self, cell_array, example1):
        rows = position_sweep([3, 2], example1, cell_array, executor=RestartExecutor(max_workers=2))
        assert [r.n for r in rows] == [2] + [3] * len(bond_orbits(3))
        assert all(r.n_modes == 2 * r.n ** 2 for r in rows)
        assert len(SCALING_CSV_HEADER) == 8

    def test_calibrated_donor_stays_good(self, cell_array, example1):
        """Sizes up to 4 keep 1-F below 1e-6."""
        base = calibrated_base_array(example1, cell_array)
        worst = worst_by_size(position_sweep([2, 3, 4], example1, base))
        assert set(worst) == {2, 3, 4}
        assert max(worst.values()) <= 1e-6

    @pytest.mark.slow
    def test_calibrated_donor_large_arrays(self, cell_array, example1):
        base = calibrated_base_array(example1, cell_array)
        worst = worst_by_size(position_sweep(range(2, 9), example1, base))
        assert max(worst.values()) <= 1e-6

    def test_size_limit(self, example1):
        with pytest.raises(UnsupportedSizeError):
            position_sweep([20], example1, max_size=12)

    def test_donor_must_be_antisymmetric(self, example1):
        lopsided = PulseSequence(np.array([1, 2]), np.array([-0.5, 0.5]), 1.0)
        with pytest.raises(DomainError):
            position_sweep([2], lopsided)

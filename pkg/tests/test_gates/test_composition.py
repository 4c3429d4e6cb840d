"""
Tests for Gate Chains and Pulse Errors
"""

import os
import sys
from dataclasses import replace

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from microtrap_gates.errors import DomainError
from microtrap_gates.gates import compose_chain, effective_fidelity, infidelity, swap_equivalent_chain


@pytest.fixture
def gate(cell_ctx, example1):
    """Example 1 metrics with the infidelity pinned to 1e-3."""
    return replace(infidelity(example1, cell_ctx), infidelity=1e-3)


class TestComposeChain:
    """Test chained gates."""

    def test_product_of_fidelities(self, gate):
        chain = compose_chain([(gate, 2.0)] * 4)
        assert chain.fidelity == pytest.approx(0.999 ** 4, rel=1e-12)
        assert chain.total_time == pytest.approx(8.0)
        assert chain.total_pulses == 4 * 612
        assert chain.n_gates == 4
        assert chain.infidelity == pytest.approx(1 - 0.999 ** 4, rel=1e-9)

    def test_swap_equivalent(self, gate):
        """SWAP plus entangling gate is four gates."""
        chain = swap_equivalent_chain(gate, 1.0)
        assert chain.n_gates == 4
        assert chain.fidelity == pytest.approx(0.999 ** 4, rel=1e-12)

    def test_swap_with_separate_constituent(self, gate):
        better = replace(gate, infidelity=0.0)
        chain = swap_equivalent_chain(gate, 1.0, swap_constituent=better, swap_duration=0.5)
        assert chain.fidelity == pytest.approx(0.999)
        assert chain.total_time == pytest.approx(2.5)

    def test_empty_chain_rejected(self):
        with pytest.raises(DomainError):
            compose_chain([])

    def test_negative_duration_rejected(self, gate):
        with pytest.raises(DomainError):
            compose_chain([(gate, -1.0)])


class TestEffectiveFidelity:
    """Test |1 - N_p epsilon|^2 F0."""

    def test_examples(self):
        assert effective_fidelity(100, 0.0, 0.99) == pytest.approx(0.99)
        assert effective_fidelity(100, 1e-4, 1.0) == pytest.approx(0.99 ** 2)
        assert effective_fidelity(612, 1e-5, 1.0) == pytest.approx((1 - 612e-5) ** 2)

    def test_zero_pulses(self):
        assert effective_fidelity(0, 0.5, 0.9) == pytest.approx(0.9)

    @pytest.mark.parametrize("args", [(-1, 0.0, 1.0), (1, -1e-3, 1.0), (1, 0.0, 1.5)])
    def test_invalid_inputs(self, args):
        with pytest.raises(DomainError):
            effective_fidelity(*args)

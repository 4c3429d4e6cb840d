"""
Tests for Optimizer Sweeps
"""

import os
import sys
from unittest.mock import Mock, patch

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from microtrap_gates.errors import DomainError
from microtrap_gates.gates import GateContext
from microtrap_gates.optimization import (
    SWEEP_CSV_HEADER,
    OptimizerConfig,
    characteristic_curve,
    compare_diagonal_to_nn,
    fit_power_law,
    min_rate_for_fidelity,
    optimize_apg,
    sweep_rep_rate,
)


class TestPowerLaw:
    """Fixed-exponent power-law fits."""

    def test_recovers_coefficient(self):
        """Exact -5/3 data returns its coefficient."""
        points = [(tau, 578.8 * tau ** (-5.0 / 3.0)) for tau in (0.5, 1.0, 2.0, 4.0)]
        fit = fit_power_law(points)
        assert fit.coefficient == pytest.approx(578.8, rel=1e-9)
        assert fit.residual < 1e-20
        assert fit.predict(1.0) == pytest.approx(578.8, rel=1e-9)

    def test_other_exponent(self):
        points = [(1.0, 3.0), (2.0, 1.5)]
        fit = fit_power_law(points, exponent=-1.0)
        assert fit.coefficient == pytest.approx(3.0)

    def test_needs_two_positive_points(self):
        with pytest.raises(DomainError):
            fit_power_law([(1.0, 2.0)])
        with pytest.raises(DomainError):
            fit_power_law([(1.0, 2.0), (-1.0, 3.0)])


class TestCharacteristicCurve:
    """Scatter of 1-F against n_max^2 xi."""

    @staticmethod
    def _result(characteristic, infidelity):
        return Mock(characteristic=characteristic, infidelity=infidelity)

    def test_monotone(self):
        curve = characteristic_curve([self._result(0.1, 0.5), self._result(0.3, 0.05), self._result(0.2, 0.2)])
        assert curve.points[0] == (0.1, 0.5)
        assert curve.monotone_above_threshold

    def test_non_monotone(self):
        curve = characteristic_curve([self._result(0.1, 0.05), self._result(0.2, 0.5)])
        assert not curve.monotone_above_threshold

    def test_points_below_threshold_ignored(self):
        curve = characteristic_curve([self._result(0.1, 1e-5), self._result(0.2, 1e-3), self._result(0.3, 0.5)])
        assert curve.monotone_above_threshold

    def test_empty(self):
        with pytest.raises(DomainError):
            characteristic_curve([])


class TestRepRateSweep:
    """Small sweeps over gate time and z bound."""

    def test_table_shape_and_order(self, cell_ctx):
        cfg = OptimizerConfig(gate_time_T_G=1.0, z_bound=3, group_count=4)
        points = sweep_rep_rate(cell_ctx, [1.5, 1.0], cfg, z_bounds=[4, 2])
        assert [(p.gate_time, p.z_bound) for p in points] == [(1.0, 2), (1.0, 4), (1.5, 2), (1.5, 4)]
        assert all(len(p.to_row()) == len(SWEEP_CSV_HEADER) for p in points)

    def test_larger_bound_never_worse(self, cell_ctx):
        """Exhaustive search over a superset cannot lose."""
        cfg = OptimizerConfig(gate_time_T_G=1.0, z_bound=3, group_count=4)
        small, large = sweep_rep_rate(cell_ctx, [1.2], cfg, z_bounds=[2, 5])
        assert large.infidelity <= small.infidelity + 1e-15

    def test_empty_times(self, cell_ctx):
        with pytest.raises(DomainError):
            sweep_rep_rate(cell_ctx, [], OptimizerConfig(gate_time_T_G=1.0))


class TestDiagonalComparison:
    """Direct diagonal gate against four nearest-neighbour gates."""

    @staticmethod
    def _fake_rates(coefficients):
        def fake(ctx, gate_time, cfg, threshold, z_bounds, chain_length, executor):
            a = coefficients.get(ctx)
            if a is None:
                return None
            return Mock(metrics=Mock(f_min=a * gate_time ** (-5.0 / 3.0)))
        return fake

    def test_quarter_time_gates_cost_more_rate(self):
        """Each NN gate gets T/4, so its rate coefficient grows by 4^(5/3)."""
        fake = self._fake_rates({"nn": 100.0, "diag": 100.0})
        with patch("microtrap_gates.optimization.sweeps.min_rate_for_fidelity", side_effect=fake):
            result = compare_diagonal_to_nn("nn", "diag", [2.0, 1.0, 4.0], OptimizerConfig(gate_time_T_G=1.0))
        assert result.operation_times == (1.0, 2.0, 4.0)
        assert result.diagonal_fit.coefficient == pytest.approx(100.0, rel=1e-9)
        assert result.coefficient_ratio == pytest.approx(4.0 ** (5.0 / 3.0), rel=1e-9)

    def test_unreachable_points_skipped(self):
        calls = []

        def fake(ctx, gate_time, cfg, threshold, z_bounds, chain_length, executor):
            calls.append(gate_time)
            if ctx == "diag" and gate_time < 1.5:
                return None
            return Mock(metrics=Mock(f_min=10.0 * gate_time ** (-5.0 / 3.0)))

        with patch("microtrap_gates.optimization.sweeps.min_rate_for_fidelity", side_effect=fake):
            result = compare_diagonal_to_nn("nn", "diag", [1.0, 2.0, 3.0], OptimizerConfig(gate_time_T_G=1.0))
            assert result.operation_times == (2.0, 3.0)
            with pytest.raises(DomainError):
                compare_diagonal_to_nn("nn", "diag", [1.0, 2.0], OptimizerConfig(gate_time_T_G=1.0))

    def test_min_rate_picks_lowest_qualifying(self, cell_ctx):
        """With no fidelity demand every non-empty gate qualifies and the lowest f_min wins."""
        cfg = OptimizerConfig(gate_time_T_G=1.0, z_bound=3, group_count=4)
        bounds = (60, 120)
        best = min_rate_for_fidelity(cell_ctx, 1.2, cfg, threshold=0.0, z_bounds=bounds)
        results = [optimize_apg(cell_ctx, OptimizerConfig(gate_time_T_G=1.2, z_bound=b, group_count=4))
                   for b in bounds]
        rates = [r.metrics.f_min for r in results if r.n_max > 0]
        assert rates
        assert best.metrics.f_min == pytest.approx(min(rates))

    def test_empty_sequence_never_qualifies(self, cell_ctx):
        """An optimizer that finds nothing better than doing nothing yields no rate."""
        empty = Mock(n_max=0, metrics=Mock(f_min=0.0))
        cfg = OptimizerConfig(gate_time_T_G=1.0, z_bound=3, group_count=4)
        with patch("microtrap_gates.optimization.sweeps.optimize_apg", return_value=empty):
            assert min_rate_for_fidelity(cell_ctx, 1.2, cfg, threshold=0.0, z_bounds=[1, 2]) is None

    def test_min_rate_none_when_unreachable(self, cell_ctx):
        cfg = OptimizerConfig(gate_time_T_G=1.0, z_bound=3, group_count=4)
        assert min_rate_for_fidelity(cell_ctx, 1.2, cfg, threshold=1.5, z_bounds=[2]) is None

    @pytest.mark.slow
    def test_optimized_nn_equivalent_needs_larger_coefficient(self, cell_modes):
        """Exhaustive four-group gates: four quarter-time NN gates cost more rate than one diagonal gate."""
        nn_ctx = GateContext.for_pair(cell_modes, 0, 1)
        diag_ctx = GateContext.for_pair(cell_modes, 0, 3)
        cfg = OptimizerConfig(gate_time_T_G=1.0, z_bound=100, group_count=4)
        result = compare_diagonal_to_nn(nn_ctx, diag_ctx, [2.6, 3.4, 4.6], cfg,
                                        threshold=0.5, z_bounds=(100, 220))
        assert len(result.operation_times) >= 2
        assert all(rate > 0 for rate in result.diagonal_rates + result.nn_rates)
        assert result.nn_fit.coefficient >= result.diagonal_fit.coefficient

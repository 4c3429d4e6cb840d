"""
Tests for Gate Evaluation

Covers residual displacements, accumulated phase, infidelity, repetition
rate conventions and calibration against the two shipped sequences.
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from microtrap_gates.errors import DomainError, InfiniteRateError, SchemaError
from microtrap_gates.gates import (
    GateContext,
    PhaseConvention,
    PulseSequence,
    RateConvention,
    accumulated_phase,
    calibrate_context,
    delta_alpha,
    delta_phi,
    infidelity,
    min_rep_rate,
    phase_matched_wavevector,
    rate_convention_gap,
    resolving_rate,
)
from microtrap_gates.physics import lamb_dicke_com, TrapArray


# ============================================================================
# PULSE SEQUENCE TESTS
# ============================================================================

class TestPulseSequence:
    """Test sequence construction and validation."""

    def test_fixture_shapes(self, example1, example2):
        """Both fixtures are anti-symmetric APG(16) sequences."""
        for seq in (example1, example2):
            assert seq.group_count == 16
            assert seq.is_antisymmetric()
        assert example1.gate_time_T_G == 2.0
        assert example2.gate_time_T_G == 1.25

    def test_pulse_count(self, example1):
        """Total pulse pairs of example 1 is the sum of |z|."""
        assert example1.total_pulse_pairs == 612
        assert example1.n_max == 47

    def test_apg_builder_mirrors(self):
        """The APG builder produces the mirrored half."""
        seq = PulseSequence.apg([3, -1], 1.0)
        assert seq.kick_counts_z.tolist() == [1, -3, 3, -1]
        assert seq.times_t.tolist() == [-0.5, -0.25, 0.25, 0.5]
        assert seq.half_counts().tolist() == [3, -1]

    def test_rejects_unsorted_times(self):
        """Times must increase strictly."""
        with pytest.raises(DomainError):
            PulseSequence(np.array([1, 1]), np.array([0.1, 0.0]), 1.0)

    def test_rejects_false_antisymmetry(self):
        """The anti-symmetric flag is checked."""
        with pytest.raises(DomainError):
            PulseSequence(np.array([1, 1]), np.array([-0.1, 0.1]), 1.0, antisymmetric=True)

    def test_from_dict_names_bad_field(self):
        """Malformed JSON names the offending field."""
        with pytest.raises(SchemaError) as info:
            PulseSequence.from_dict({"z": [1, "a"], "t_over_tau0": [0.0, 0.1], "T_G_over_tau0": 1.0})
        assert info.value.field_name == "z"
        with pytest.raises(SchemaError) as info:
            PulseSequence.from_dict({"z": [1], "t_over_tau0": [0.0], "T_G_over_tau0": 1.0, "zz": 1})
        assert info.value.field_name == "zz"

    def test_dict_reload_preserves_sequence(self, example1):
        """to_dict/from_dict reproduces the sequence."""
        again = PulseSequence.from_dict(example1.to_dict())
        assert np.array_equal(again.kick_counts_z, example1.kick_counts_z)
        assert np.array_equal(again.times_t, example1.times_t)


# ============================================================================
# CORE QUANTITY TESTS
# ============================================================================

class TestTrivialLimits:
    """Test empty and single-group sequences."""

    def test_empty_sequence(self, cell_ctx):
        """No pulses: no displacement, phase error -pi/4, 1-F = pi^2/24."""
        seq = PulseSequence.empty(1.0)
        assert np.array_equal(delta_alpha(seq, cell_ctx), np.zeros(8, dtype=complex))
        assert delta_phi(seq, cell_ctx) == -math.pi / 4
        metrics = infidelity(seq, cell_ctx)
        assert abs(metrics.infidelity - math.pi ** 2 / 24) < 1e-12

    def test_single_group_at_zero(self, cell_ctx):
        """One kick at t = 0 displaces every mode by 2 eta."""
        seq = PulseSequence(np.array([1]), np.array([0.0]), 1.0)
        assert np.allclose(delta_alpha(seq, cell_ctx), 2.0 * cell_ctx.modes.lamb_dicke, rtol=1e-14)

    def test_infidelity_clamped(self, cell_ctx):
        """Huge residual displacement clamps 1-F to 1 and keeps the raw value."""
        seq = PulseSequence(np.array([200]), np.array([0.0]), 1.0)
        metrics = infidelity(seq, cell_ctx)
        assert metrics.infidelity == 1.0
        assert metrics.raw_infidelity > 1.0

    def test_antisymmetric_real_part_exactly_zero(self, cell_ctx):
        """Anti-symmetric sequences restore momentum structurally."""
        rng = np.random.default_rng(7)
        for _ in range(200):
            half = rng.integers(-50, 51, size=int(rng.integers(1, 9)))
            seq = PulseSequence.apg(half, float(rng.uniform(0.2, 3.0)))
            alphas = delta_alpha(seq, cell_ctx)
            assert np.abs(alphas.real).max() <= 1e-12

    def test_finite_difference_of_phase(self, cell_ctx, example1):
        """Adding one pair to one group shifts the phase by the pair-sum difference."""
        z = example1.kick_counts_z.copy()
        z[3] += 1
        bumped = PulseSequence(z, example1.times_t, example1.gate_time_T_G)
        eta = cell_ctx.modes.lamb_dicke
        w = cell_ctx.modes.frequencies
        gaps = np.abs(example1.times_t - example1.times_t[3]) * example1.time_scale(cell_ctx.modes.omega_t)
        # new pair terms: one extra kick at group 3 against every other group
        extra = 8.0 * np.sum(eta ** 2 * cell_ctx.coupling_products()
                             * (np.sin(np.outer(w, np.delete(gaps, 3))) @ np.delete(example1.kick_counts_z, 3)))
        assert accumulated_phase(bumped, cell_ctx) - accumulated_phase(example1, cell_ctx) == pytest.approx(extra, rel=1e-9, abs=1e-8)


# ============================================================================
# PUBLISHED SEQUENCE TESTS
# ============================================================================

class TestPublishedSequences:
    """Regression against the two shipped sequences."""

    def test_example1_motional_term(self, cell_ctx, example1):
        """Example 1 closes every mode's loop."""
        metrics = infidelity(example1, cell_ctx)
        assert metrics.motional_term() <= 1e-8

    def test_example1_uncalibrated(self, cell_ctx, example1):
        """At 393 nm example 1 already reaches 1-F <= 1e-8."""
        metrics = infidelity(example1, cell_ctx)
        assert metrics.infidelity <= 1e-8
        assert metrics.f_min == pytest.approx(376.0, abs=1.0)

    def test_example1_calibrated(self, cell_ctx, example1):
        """With the phase-matched wave vector 1-F drops below 1e-8."""
        ctx = calibrate_context(example1, cell_ctx)
        metrics = infidelity(example1, ctx)
        assert metrics.infidelity <= 1e-8
        assert abs(metrics.delta_phi) < 1e-9

    def test_calibrated_eta_near_published(self, cell_array, cell_ctx, example1):
        """The phase-matched wave vector gives eta_com within 2% of 0.164."""
        k = phase_matched_wavevector(example1, cell_ctx)
        eta = lamb_dicke_com(cell_array.with_wavevector(k))
        assert eta == pytest.approx(0.164, rel=0.02)

    def test_example2(self, cell_ctx, example1, example2):
        """Example 2 lands in [3e-5, 3e-4] and is worse than example 1."""
        metrics = infidelity(example2, cell_ctx)
        assert 3e-5 <= metrics.infidelity <= 3e-4
        assert metrics.f_min == pytest.approx(947.2, abs=1.0)
        assert metrics.infidelity > infidelity(example1, cell_ctx).infidelity

    def test_ordered_pairs_doubles_phase(self, cell_modes, example1):
        """Counting both pair orders puts |Phi| near pi/2."""
        unordered = GateContext.for_pair(cell_modes, 0, 1)
        ordered = GateContext.for_pair(cell_modes, 0, 1, phase_convention=PhaseConvention.ORDERED_PAIRS)
        assert accumulated_phase(example1, ordered) == pytest.approx(2 * accumulated_phase(example1, unordered), rel=1e-12)
        assert abs(delta_phi(example1, ordered) - math.pi / 4) < 0.03

    def test_phase_scales_as_k_squared(self, cell_ctx, example1):
        """Doubling k quadruples the phase."""
        k = cell_ctx.modes.laser_wavevector_k
        ratio = accumulated_phase(example1, cell_ctx.with_wavevector(2 * k)) / accumulated_phase(example1, cell_ctx)
        assert ratio == pytest.approx(4.0, rel=1e-12)

    def test_thermal_occupation_raises_motional_term(self, cell_modes, example2):
        """Weights grow with (1/2 + nbar)."""
        cold = infidelity(example2, GateContext.for_pair(cell_modes, 0, 1))
        warm = infidelity(example2, GateContext.for_pair(cell_modes, 0, 1, nbar=1.0))
        assert warm.motional_term() == pytest.approx(3.0 * cold.motional_term(), rel=1e-12)

    def test_infidelity_non_decreasing_in_nbar(self, cell_modes, example2):
        """Raising any mode's occupation never lowers 1-F."""
        values = [infidelity(example2, GateContext.for_pair(cell_modes, 0, 1, nbar=n)).raw_infidelity
                  for n in (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0)]
        assert all(b >= a for a, b in zip(values, values[1:]))

        base = np.zeros(cell_modes.n_modes)
        reference = infidelity(example2, GateContext.for_pair(cell_modes, 0, 1, nbar=base)).raw_infidelity
        for m in range(cell_modes.n_modes):
            bumped = base.copy()
            bumped[m] = 3.0
            warm = infidelity(example2, GateContext.for_pair(cell_modes, 0, 1, nbar=bumped)).raw_infidelity
            assert warm >= reference


# ============================================================================
# TIME REVERSAL TESTS
# ============================================================================

class TestTimeReversal:
    """Reversing a sequence keeps |delta_alpha|, the phase and 1-F."""

    def test_published_sequences(self, cell_ctx, example1, example2):
        """Both shipped sequences evaluate identically when reversed."""
        for seq in (example1, example2):
            forward = infidelity(seq, cell_ctx)
            backward = infidelity(seq.reversed(), cell_ctx)
            assert np.allclose(np.abs(backward.delta_alpha), np.abs(forward.delta_alpha), rtol=1e-9, atol=1e-14)
            assert backward.delta_phi == pytest.approx(forward.delta_phi, abs=1e-12)
            assert backward.raw_infidelity == pytest.approx(forward.raw_infidelity, rel=1e-9, abs=1e-15)

    def test_random_sequences(self, cell_ctx):
        """Random non-symmetric sequences conjugate delta_alpha under reversal."""
        rng = np.random.default_rng(11)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            z = rng.integers(-4, 5, size=n)
            t = np.sort(rng.uniform(-1.0, 1.0, size=n))
            seq = PulseSequence(z, t, 2.0)
            back = seq.reversed()
            assert np.allclose(delta_alpha(back, cell_ctx), np.conj(delta_alpha(seq, cell_ctx)), atol=1e-12)
            assert delta_phi(back, cell_ctx) == pytest.approx(delta_phi(seq, cell_ctx), abs=1e-12)


# ============================================================================
# REPETITION RATE TESTS
# ============================================================================

class TestRepetitionRate:
    """Test f_min conventions."""

    def test_two_unit_groups(self):
        """|z| = 1 groups dt apart need f_min = 1/dt."""
        seq = PulseSequence(np.array([1, -1]), np.array([-0.25, 0.25]), 1.0)
        assert min_rep_rate(seq) == pytest.approx(2.0)
        assert min_rep_rate(seq, RateConvention.WHOLE_GROUP) == pytest.approx(2.0)

    def test_published_rates_within_factor(self, example1, example2):
        """Computed f_min is within 1.5x of the quoted 450 and 950."""
        assert min_rep_rate(example1) == pytest.approx(376.0)
        for seq, quoted in ((example1, 450.0), (example2, 950.0)):
            ratio = min_rep_rate(seq) / quoted
            assert 1 / 1.5 <= ratio <= 1.5

    def test_whole_group_never_smaller(self, example1, example2):
        """WHOLE_GROUP demands at least the HALF_GROUP rate."""
        for seq in (example1, example2):
            assert min_rep_rate(seq, RateConvention.WHOLE_GROUP) >= min_rep_rate(seq)

    def test_gap_logged(self, cell_ctx, example1, caplog):
        """A >5% difference from the quoted rate is logged."""
        metrics = infidelity(example1, cell_ctx)
        with caplog.at_level("WARNING"):
            ratio = rate_convention_gap(metrics, 450.0)
        assert ratio == pytest.approx(376.0 / 450.0)
        assert "differs" in caplog.text

    def test_coincident_groups(self):
        """Two non-empty groups at the same time have no finite rate."""
        with pytest.raises(InfiniteRateError):
            resolving_rate(np.array([1, 1]), np.array([0.0, 0.0]))


# ============================================================================
# CONTEXT TESTS
# ============================================================================

class TestGateContext:
    """Test context validation."""

    def test_same_ion_rejected(self, cell_modes):
        with pytest.raises(DomainError):
            GateContext.for_pair(cell_modes, 1, 1)

    def test_default_direction_along_separation(self, cell_modes):
        """Kicks default to the unit vector from mu to nu."""
        ctx = GateContext.for_pair(cell_modes, 0, 1)
        sep = cell_modes.positions[1] - cell_modes.positions[0]
        assert np.allclose(ctx.laser_direction_K, sep / np.linalg.norm(sep))

    def test_negative_nbar_rejected(self, cell_modes):
        with pytest.raises(DomainError):
            GateContext.for_pair(cell_modes, 0, 1, nbar=-0.5)

    def test_metrics_reproducible(self, cell_ctx, example2):
        """Re-evaluating gives bit-identical metrics."""
        a = infidelity(example2, cell_ctx)
        b = infidelity(example2, cell_ctx)
        assert a.infidelity == b.infidelity
        assert np.array_equal(a.delta_alpha, b.delta_alpha)
        assert a.recompute_infidelity() == pytest.approx(a.infidelity, rel=1e-12)

    def test_lab_wavelength_matters(self):
        """A different kick wavelength changes eta and the phase."""
        modes_a = TrapArray.from_lab_units(laser_wavelength_nm=393.0)
        modes_b = TrapArray.from_lab_units(laser_wavelength_nm=786.0)
        assert lamb_dicke_com(modes_a) == pytest.approx(2 * lamb_dicke_com(modes_b), rel=1e-12)

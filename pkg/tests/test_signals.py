"""Tests for the synthetic waveform generators."""

import logging

import numpy as np
import pytest

from hpl_phasor.bench.signals import (
    MultitoneParams,
    add_noise,
    gen_am,
    gen_multitone,
    gen_pm,
    gen_ramp,
    gen_step,
    noise_sigma,
)
from hpl_phasor.estimation.estimator import estimate_series

FS = 10000.0
PARAMS = MultitoneParams()


class TestMultitone:
    def test_peak_bounded_by_amplitude_sum(self):
        signal = gen_multitone(PARAMS, 1.0, FS, seed=3)
        assert np.max(np.abs(signal.samples)) <= 2.32 + 1e-12
        assert signal.reference.orders == list(range(1, 14))

    def test_same_seed_same_samples(self):
        first = gen_multitone(PARAMS, 0.5, FS, seed=11)
        second = gen_multitone(PARAMS, 0.5, FS, seed=11)
        assert first.samples.tobytes() == second.samples.tobytes()

    def test_different_seed_different_phases(self):
        first = gen_multitone(PARAMS, 0.5, FS, seed=11)
        second = gen_multitone(PARAMS, 0.5, FS, seed=12)
        assert not np.allclose(first.samples, second.samples)

    def test_steady_reference_is_constant(self):
        signal = gen_multitone(PARAMS, 1.0, FS, seed=5)
        for h in (1, 2, 13):
            values = signal.reference(h, np.array([0.0, 0.37, 0.99]))
            np.testing.assert_allclose(values, values[0])
            assert abs(values[0]) == pytest.approx(PARAMS.amplitude(h))

    def test_rms_matches_component_energy(self):
        signal = gen_multitone(PARAMS, 2.0, FS, seed=2)
        expected = np.sqrt((1.0 + 12 * 0.1**2 + 12 * 0.01**2) / 2)
        assert np.sqrt(np.mean(signal.samples**2)) == pytest.approx(expected, rel=0.01)

    def test_obi_frequencies(self):
        assert PARAMS.obi_frequency(2) == 75.0
        assert PARAMS.obi_frequency(13) == 625.0

    def test_without_obi_tft_recovers_reference(self, tft_bank):
        params = MultitoneParams(obi_amplitude_pu=0.0)
        signal = gen_multitone(params, 1.0, FS, seed=9)
        series = estimate_series(signal.samples, signal.start_time_s, tft_bank)
        for h in range(1, 14):
            truth = signal.reference(h, series.tags)
            assert np.max(np.abs(series.column(h) - truth)) <= 1e-9

    def test_above_nyquist(self):
        with pytest.raises(ValueError):
            gen_multitone(PARAMS, 0.1, 1200.0, seed=1)

    def test_components_sum_to_samples_without_obi(self):
        params = MultitoneParams(obi_amplitude_pu=0.0)
        signal = gen_multitone(params, 0.2, FS, seed=4)
        total = sum(signal.reference.component(h, signal.times) for h in signal.reference.orders)
        np.testing.assert_allclose(total, signal.samples, atol=1e-12)

    def test_frequency_deviation_reference_rotates(self):
        params = MultitoneParams(fundamental_frequency_hz=50.5)
        signal = gen_multitone(params, 1.0, FS, seed=4)
        ratio = signal.reference(3, 0.1) / signal.reference(3, 0.0)
        assert complex(ratio) == pytest.approx(np.exp(2j * np.pi * 3 * 0.5 * 0.1))


class TestModulation:
    def test_am_envelope_at_zero(self):
        signal = gen_am(PARAMS, FS, 1.0, seed=1, modulation_frequency_hz=2.0)
        assert abs(signal.reference(2, 0.0)) == pytest.approx(0.1 * 1.2)
        assert abs(signal.reference(1, 0.25)) == pytest.approx(1.0 - 0.1)

    @pytest.mark.parametrize("h", [2, 5, 9, 13])
    def test_am_depth_grows_with_order(self, h):
        reference = gen_am(PARAMS, FS, 1.0, seed=1, modulation_frequency_hz=2.0).reference
        assert abs(reference(h, 0.0)) == pytest.approx(0.1 * (1 + 0.1 * h))
        assert abs(reference(h, 0.25)) == pytest.approx(0.1 * abs(1 - 0.1 * h))

    def test_am_envelope_crosses_zero_above_order_ten(self):
        reference = gen_am(PARAMS, FS, 1.0, seed=1, modulation_frequency_hz=2.0).reference
        # 1 + 1.3 cos(4*pi*t) vanishes where cos(4*pi*t) = -1/1.3
        t_zero = np.arccos(-1 / 1.3) / (4 * np.pi)
        assert abs(reference(13, t_zero)) == pytest.approx(0.0, abs=1e-12)
        flipped = reference(13, 0.25) / reference(13, 0.0)
        assert flipped.real < 0 and abs(flipped.imag) < 1e-12

    def test_am_constant_depth(self):
        signal = gen_am(PARAMS, FS, 1.0, seed=1, modulation_frequency_hz=2.0, depth_scales_with_order=False)
        assert abs(signal.reference(3, 0.0)) == pytest.approx(0.1 * 1.1)

    def test_pm_phase_at_zero(self):
        reference = gen_pm(PARAMS, FS, 1.0, seed=1, modulation_frequency_hz=2.0).reference
        at_zero = reference(4, 0.0)
        quarter = reference(4, 0.125)
        # cos(-pi) = -1 at t = 0; cos(pi/2 - pi) = 0 a quarter period later
        assert np.angle(at_zero / quarter) == pytest.approx(-0.4)
        assert abs(at_zero) == pytest.approx(0.1)

    def test_modulation_above_half_reporting_rate_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            signal = gen_am(PARAMS, FS, 0.5, seed=1, modulation_frequency_hz=30.0)
        assert signal.warnings
        assert "reporting rate" in caplog.text

    def test_slow_modulation_has_no_warning(self):
        assert gen_pm(PARAMS, FS, 0.5, seed=1, modulation_frequency_hz=2.0).warnings == ()

    def test_ramp_sweeps_frequency(self):
        signal = gen_ramp(PARAMS, FS, 1.0, seed=1)
        dt = 1e-4
        for t, expected_hz in ((0.0, 49.5), (0.5, 50.0), (0.9999, 50.4999)):
            phase_rate = np.angle(signal.reference(1, t + dt) / signal.reference(1, t)) / (2 * np.pi * dt)
            assert 50.0 + phase_rate == pytest.approx(expected_hz, abs=1e-3)


class TestStep:
    def test_amplitude_step(self):
        signal = gen_step(5, 0.1, 0.0, FS, 1.0)
        reference = signal.reference
        assert signal.step_time_s == 0.0
        assert abs(reference(1, -0.01)) == pytest.approx(1.0)
        assert abs(reference(5, -0.01)) == pytest.approx(0.1)
        assert abs(reference(1, 0.01)) == pytest.approx(1.1)
        assert abs(reference(5, 0.01)) == pytest.approx(0.11)
        assert abs(reference(5, 0.0)) == pytest.approx(0.11)

    def test_phase_step(self):
        reference = gen_step(3, 0.0, -np.pi / 18, FS, 1.0).reference
        assert np.degrees(np.angle(reference(3, 0.2))) == pytest.approx(-10.0)
        assert np.angle(reference(3, -0.2)) == pytest.approx(0.0)

    def test_record_is_centred_on_step(self):
        signal = gen_step(2, 0.1, 0.0, FS, 1.0)
        times = signal.times
        assert times[0] == pytest.approx(-0.5)
        assert 0.0 in times
        assert signal.samples.size == 10000

    def test_no_step(self):
        signal = gen_step(2, 0.0, 0.0, FS, 0.5)
        assert abs(signal.reference(2, -0.1)) == pytest.approx(abs(signal.reference(2, 0.1)))

    def test_unrepresentable_order(self):
        with pytest.raises(ValueError):
            gen_step(1, 0.1, 0.0, FS, 1.0)


class TestNoise:
    def test_sigma_at_60_db(self):
        assert noise_sigma(60.0) == pytest.approx(7.071e-4, rel=1e-3)

    def test_infinite_snr_is_identity(self):
        samples = np.linspace(-1, 1, 50)
        noisy = add_noise(samples, float("inf"), seed=1)
        np.testing.assert_array_equal(noisy, samples)
        assert noisy is not samples

    def test_variance(self):
        noisy = add_noise(np.zeros(1_000_000), 60.0, seed=3)
        assert np.var(noisy) == pytest.approx(noise_sigma(60.0) ** 2, rel=0.05)
        assert abs(np.mean(noisy)) < 1e-5

    def test_seeded(self):
        first = add_noise(np.zeros(100), 50.0, seed=[1, 2])
        second = add_noise(np.zeros(100), 50.0, seed=[1, 2])
        np.testing.assert_array_equal(first, second)

"""Tests for window and streaming phasor estimation."""

import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hpl_phasor.bench.metrics import tve
from hpl_phasor.design.filters import tft_filter_bank
from hpl_phasor.estimation.estimator import (
    PhasorStream,
    estimate_series,
    estimate_window,
    measure_frame_time,
    stream_estimate,
)
from hpl_phasor.estimation.models import PhasorEstimate, SampleWindow, wrap_phase

from .conftest import make_config, steady_signal

AMPLITUDES = {1: 1.0, 2: 0.1, 3: 0.05, 5: 0.1, 7: 0.08, 13: 0.02}
PHASES = {1: 0.3, 2: -1.2, 3: 2.9, 5: 0.0, 7: -3.0, 13: 1.1}

SMALL_CFG = make_config(sampling_rate_hz=2000.0, max_harmonic=5)
SMALL_BANK = tft_filter_bank(SMALL_CFG)

sample_values = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def expected_phasor(h: int) -> complex:
    return AMPLITUDES.get(h, 0.0) * np.exp(1j * PHASES.get(h, 0.0))


class TestEstimateWindow:
    def test_centre_window_matches_series(self, tft_bank, reference_cfg):
        samples = steady_signal(reference_cfg, AMPLITUDES, PHASES, duration_s=0.1)
        window = SampleWindow(samples=samples[0:601], t_tag=0.03)
        estimates = estimate_window(window, tft_bank)
        series = estimate_series(samples, 0.0, tft_bank)
        assert [e.order for e in estimates] == tft_bank.orders
        np.testing.assert_allclose([e.phasor for e in estimates], series.phasors[0], atol=1e-12)

    def test_wrong_length(self, tft_bank):
        with pytest.raises(ValueError):
            estimate_window(SampleWindow(samples=np.zeros(600), t_tag=0.0), tft_bank)

    def test_estimate_properties(self):
        estimate = PhasorEstimate(order=2, t_tag=0.0, phasor=complex(0.0, -0.5))
        assert estimate.amplitude == pytest.approx(0.5)
        assert estimate.phase == pytest.approx(-np.pi / 2)

    @pytest.mark.parametrize(
        "phase,expected", [(np.pi, np.pi), (-np.pi, np.pi), (2.5 * np.pi, 0.5 * np.pi), (0.5, 0.5)]
    )
    def test_wrap_phase(self, phase, expected):
        assert wrap_phase(phase) == pytest.approx(expected)


class TestSteadyRecovery:
    def test_tft_bank_recovers_in_model_phasors(self, tft_bank, reference_cfg):
        samples = steady_signal(reference_cfg, AMPLITUDES, PHASES)
        reports = stream_estimate(samples, 0.0, tft_bank)
        assert len(reports) == 47
        for report in reports:
            for estimate in report:
                assert abs(estimate.phasor - expected_phasor(estimate.order)) <= 1e-9

    def test_optimized_bank_recovers_in_model_phasors(self, optimized_bank, reference_cfg):
        samples = steady_signal(reference_cfg, AMPLITUDES, PHASES)
        series = estimate_series(samples, 0.0, optimized_bank)
        for h in AMPLITUDES:
            for estimate in series.column(h):
                # TVE below 1e-6 as a fraction
                assert tve(complex(estimate), expected_phasor(h)) < 1e-4

    def test_first_report_tag_and_spacing(self, tft_bank, reference_cfg):
        series = estimate_series(np.zeros(10000), 0.5, tft_bank)
        assert series.tags[0] == pytest.approx(0.53)
        np.testing.assert_allclose(np.diff(series.tags), 0.02)

    def test_off_nominal_frequency_appears_as_phase_ramp(self, tft_bank, reference_cfg):
        fs = reference_cfg.sampling_rate_hz
        t = np.arange(10000) / fs
        samples = np.cos(2 * np.pi * 50.2 * t)
        series = estimate_series(samples, 0.0, tft_bank)
        truth = np.exp(2j * np.pi * 0.2 * series.tags)
        errors = [tve(complex(p), r) for p, r in zip(series.column(1), truth)]
        assert max(errors) < 0.1


class TestStreaming:
    def test_short_input_gives_no_reports(self, tft_bank, caplog):
        with caplog.at_level(logging.WARNING):
            reports = stream_estimate(np.zeros(600), 0.0, tft_bank)
        assert reports == []
        assert "window" in caplog.text

    def test_exactly_one_window(self, tft_bank):
        assert len(stream_estimate(np.zeros(601), 0.0, tft_bank)) == 1

    def test_frames_counted(self, tft_bank):
        stream = PhasorStream(tft_bank)
        stream.push(np.zeros(1000))
        stream.push(np.zeros(1000))
        assert stream.frames == 7

    def test_reporting_rate_must_divide(self, tft_bank):
        with pytest.raises(ValueError):
            PhasorStream(tft_bank, reporting_rate_hz=30.0)

    @settings(max_examples=100, deadline=None)
    @given(
        samples=arrays(np.float64, 1200, elements=sample_values),
        cuts=st.lists(st.integers(min_value=0, max_value=1200), max_size=6),
    )
    def test_chunking_does_not_change_reports(self, samples, cuts):
        whole = estimate_series(samples, 0.0, SMALL_BANK)
        stream = PhasorStream(SMALL_BANK)
        bounds = [0] + sorted(cuts) + [samples.size]
        parts = [stream.push_series(samples[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]
        tags = np.concatenate([p.tags for p in parts])
        phasors = np.concatenate([p.phasors for p in parts])
        np.testing.assert_array_equal(tags, whole.tags)
        np.testing.assert_allclose(phasors, whole.phasors, rtol=0, atol=1e-10)

    @settings(max_examples=100, deadline=None)
    @given(
        x=arrays(np.float64, 800, elements=sample_values),
        y=arrays(np.float64, 800, elements=sample_values),
        a=st.floats(min_value=-5.0, max_value=5.0),
        b=st.floats(min_value=-5.0, max_value=5.0),
    )
    def test_linearity(self, x, y, a, b):
        combined = estimate_series(a * x + b * y, 0.0, SMALL_BANK).phasors
        separate = a * estimate_series(x, 0.0, SMALL_BANK).phasors + b * estimate_series(y, 0.0, SMALL_BANK).phasors
        np.testing.assert_allclose(combined, separate, rtol=0, atol=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(samples=arrays(np.float64, 900, elements=sample_values))
    def test_determinism_and_time_shift(self, samples):
        first = estimate_series(samples, 0.0, SMALL_BANK)
        second = estimate_series(samples, 0.0, SMALL_BANK)
        np.testing.assert_array_equal(first.phasors, second.phasors)

        step = SMALL_CFG.decimation
        shifted = estimate_series(samples[step:], step / SMALL_CFG.sampling_rate_hz, SMALL_BANK)
        np.testing.assert_allclose(shifted.tags, first.tags[1:], rtol=0, atol=1e-12)
        np.testing.assert_allclose(shifted.phasors, first.phasors[1:], rtol=1e-9, atol=1e-9)


class TestFrameTiming:
    def test_counts_at_least_min_frames(self, tft_bank):
        mean, frames = measure_frame_time(tft_bank, np.zeros(2000), 25)
        assert frames >= 25
        assert mean >= 0.0

    def test_short_input(self, tft_bank):
        assert measure_frame_time(tft_bank, np.zeros(100), 10) == (0.0, 0)

    @pytest.mark.slow
    def test_frame_time_grows_linearly_in_window_length(self):
        lengths, times = [], []
        for cycles in (3, 5, 10):
            bank = tft_filter_bank(make_config(window_cycles=cycles))
            samples = np.random.default_rng(1).normal(size=4 * bank.window_length)
            best = min(measure_frame_time(bank, samples, 2000)[0] for _ in range(5))
            lengths.append(bank.window_length)
            times.append(best)
        assert lengths == [601, 1001, 2001]
        slope, intercept = np.polyfit(lengths, times, 1)
        fitted = slope * np.asarray(lengths) + intercept
        assert np.max(np.abs(fitted - times) / np.asarray(times)) <= 0.3

"""Tests for TFT filters, SVD composition and frequency responses."""

import numpy as np
import pytest

from hpl_phasor.core.models import NumericalConditionError
from hpl_phasor.design.filters import (
    compose_filter,
    compute_l_matrix,
    system_matrix,
    taylor_factors,
    tft_derivative_filters,
    tft_filter_bank,
    tft_pseudo_inverse,
)
from hpl_phasor.design.models import MultiplierSet, TransitionBand
from hpl_phasor.design.response import frequency_response, gain_curves, max_transition_gain

from .conftest import make_config

EQUIVALENCE_SHAPES = [(3, 2), (5, 4), (7, 6)]
ORDERS = list(range(2, 14))


class TestTftBank:
    def test_bank_shape(self, tft_bank):
        assert tft_bank.orders == list(range(1, 14))
        assert tft_bank.matrix.shape == (13, 601)
        assert tft_bank.kind == "tft"

    @pytest.mark.parametrize("h", [1, 2, 7, 13])
    def test_unit_gain_at_own_harmonic(self, tft_bank, h):
        gain = frequency_response(tft_bank.filters[h], h * 50.0, 10000.0)
        assert abs(gain - 1.0) <= 1e-9

    @pytest.mark.parametrize("h", [2, 5, 13])
    def test_rejects_other_harmonics_and_conjugates(self, tft_bank, h):
        others = [k * 50.0 for k in range(1, 14) if k != h] + [-k * 50.0 for k in range(1, 14)]
        gains = frequency_response(tft_bank.filters[h], others, 10000.0)
        assert np.max(np.abs(gains)) <= 1e-9

    def test_pseudo_inverse_is_left_inverse(self, reference_cfg):
        g = system_matrix(reference_cfg)
        pinv = tft_pseudo_inverse(reference_cfg)
        identity = pinv @ g
        scale = np.abs(identity).max()
        assert np.max(np.abs(identity - np.eye(identity.shape[0]))) <= 1e-8 * scale

    def test_derivative_filters_rows(self, reference_cfg):
        rows = tft_derivative_filters(reference_cfg, 3)
        assert rows.shape == (3, 601)
        np.testing.assert_array_equal(rows[0], tft_filter_bank(reference_cfg).filters[3])

    def test_derivative_filters_order_range(self, reference_cfg):
        with pytest.raises(ValueError):
            tft_derivative_filters(reference_cfg, 14)

    def test_singular_system(self):
        # at fs = 2*H*f0 the top harmonic and its conjugate coincide
        with pytest.raises(NumericalConditionError):
            tft_pseudo_inverse(make_config(window_cycles=1, taylor_order=0, sampling_rate_hz=1300.0))


class TestComposition:
    @pytest.mark.parametrize("cycles,order", EQUIVALENCE_SHAPES)
    def test_unit_multipliers_reproduce_tft_rows(self, cycles, order):
        cfg = make_config(window_cycles=cycles, taylor_order=order)
        factors = taylor_factors(cfg)
        tft = tft_filter_bank(cfg)
        for h in ORDERS:
            composed = compose_filter(cfg, h, compute_l_matrix(cfg, h), factors, MultiplierSet())
            assert np.max(np.abs(composed - tft.filters[h])) <= 1e-9, f"h={h}"

    def test_derivative_rows_follow_superposition(self, reference_cfg):
        factors = taylor_factors(reference_cfg)
        for h in (2, 9):
            expected = tft_derivative_filters(reference_cfg, h)
            rebuilt = factors.right @ (compute_l_matrix(reference_cfg, h) / factors.singular_values[:, None])
            for row, target in zip(rebuilt, expected):
                assert np.max(np.abs(row - target)) <= 1e-8 * np.max(np.abs(target))

    def test_multiplier_set_and_sequence_agree(self, reference_cfg):
        factors = taylor_factors(reference_cfg)
        l_h = compute_l_matrix(reference_cfg, 4)
        ys = MultiplierSet(values={4: [1.0, 1.0, 2.3]})
        np.testing.assert_array_equal(
            compose_filter(reference_cfg, 4, l_h, factors, ys),
            compose_filter(reference_cfg, 4, l_h, factors, [1.0, 1.0, 2.3]),
        )

    @pytest.mark.parametrize("cycles,order", EQUIVALENCE_SHAPES)
    def test_even_multipliers_leave_filter_unchanged(self, cycles, order):
        cfg = make_config(window_cycles=cycles, taylor_order=order)
        factors = taylor_factors(cfg)
        for h in (2, 7, 13):
            l_h = compute_l_matrix(cfg, h)
            ys = np.ones(cfg.n_terms)
            ys[2::2] = 2.3
            perturbed = ys.copy()
            perturbed[1::2] = 1.0 + 1e-3 * np.arange(1, perturbed[1::2].size + 1)
            scaled = ys.copy()
            scaled[1::2] = 9.0
            expected = compose_filter(cfg, h, l_h, factors, ys)
            for variant in (perturbed, scaled):
                changed = compose_filter(cfg, h, l_h, factors, variant)
                assert np.max(np.abs(changed - expected)) <= 1e-12, f"h={h}"

    @pytest.mark.parametrize("ys", [[1.0, 1.0, 0.0], [1.0, 1.0, -2.0]])
    def test_nonpositive_multiplier(self, reference_cfg, ys):
        factors = taylor_factors(reference_cfg)
        with pytest.raises(ValueError):
            compose_filter(reference_cfg, 2, compute_l_matrix(reference_cfg, 2), factors, ys)

    def test_wrong_multiplier_count(self, reference_cfg):
        factors = taylor_factors(reference_cfg)
        with pytest.raises(ValueError):
            compose_filter(reference_cfg, 2, compute_l_matrix(reference_cfg, 2), factors, [1.0, 1.0])

    def test_l_matrix_shape_and_range(self, reference_cfg):
        assert compute_l_matrix(reference_cfg, 13).shape == (3, 601)
        with pytest.raises(ValueError):
            compute_l_matrix(reference_cfg, 0)

    def test_multiplier_set_validation(self):
        with pytest.raises(ValueError):
            MultiplierSet(values={2: [1.0, 2.0, 2.0]})
        with pytest.raises(ValueError):
            MultiplierSet(values={2: [1.0, 1.0, 0.0]})


class TestResponse:
    def test_scalar_and_array(self, tft_bank):
        r = tft_bank.filters[2]
        scalar = frequency_response(r, 100.0, 10000.0)
        array = frequency_response(r, [100.0, 125.0], 10000.0)
        assert isinstance(scalar, complex)
        assert array.shape == (2,)
        assert array[0] == pytest.approx(scalar)

    def test_even_length_rejected(self):
        with pytest.raises(ValueError):
            frequency_response(np.ones(4), 50.0, 10000.0)

    def test_transition_band_edges(self, reference_cfg):
        band = TransitionBand.for_order(reference_cfg, 2)
        assert band.lower == (50.0, 75.0)
        assert band.upper == (125.0, 150.0)
        grid = band.grid(0.1)
        assert grid[0] == 50.0 and grid[-1] == 150.0
        assert 75.0 in grid and 125.0 in grid

    def test_grid_step_must_be_positive(self, reference_cfg):
        with pytest.raises(ValueError):
            TransitionBand.for_order(reference_cfg, 2).grid(0.0)

    def test_empty_band(self):
        band = TransitionBand(order=2, lower=(75.0, 75.0), upper=(125.0, 150.0))
        with pytest.raises(ValueError):
            band.grid(0.1)

    @pytest.mark.parametrize("h", ORDERS)
    def test_tft_transition_gain_near_058(self, tft_bank, reference_cfg, h):
        band = TransitionBand.for_order(reference_cfg, h)
        gain = max_transition_gain(tft_bank.filters[h], band, 0.1, 10000.0)
        assert gain == pytest.approx(0.58, abs=0.02)

    def test_gain_curves_frame(self, tft_bank):
        frame = gain_curves(tft_bank, tft_bank, orders=[2, 3], stop_hz=200.0, step_hz=1.0)
        assert list(frame.columns) == ["frequency_hz", "h", "gain", "baseline_gain"]
        assert len(frame) == 2 * 201
        at_100 = frame[(frame.h == 2) & (frame.frequency_hz == 100.0)]
        assert float(at_100.gain.iloc[0]) == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(frame.gain, frame.baseline_gain)

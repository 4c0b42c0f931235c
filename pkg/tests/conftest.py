"""Shared fixtures: the reference 50 Hz / 10 kHz configuration and its banks."""

import numpy as np
import pytest

from hpl_phasor.core.models import ModelConfig
from hpl_phasor.design.bank import design_bank
from hpl_phasor.design.filters import tft_filter_bank
from hpl_phasor.design.models import FilterBank

REFERENCE = dict(
    nominal_frequency_hz=50.0,
    sampling_rate_hz=10000.0,
    reporting_rate_hz=50.0,
    max_harmonic=13,
    taylor_order=2,
    window_cycles=3,
)


def make_config(**overrides: float) -> ModelConfig:
    return ModelConfig(**{**REFERENCE, **overrides})


def steady_signal(cfg: ModelConfig, amplitudes: dict, phases: dict, duration_s: float = 1.0) -> np.ndarray:
    """Sum of A_h cos(2*pi*h*f0*t + phi_h) sampled from t = 0."""
    t = np.arange(int(round(duration_s * cfg.sampling_rate_hz))) / cfg.sampling_rate_hz
    samples = np.zeros(t.size)
    for h, amplitude in amplitudes.items():
        samples += amplitude * np.cos(2 * np.pi * h * cfg.nominal_frequency_hz * t + phases[h])
    return samples


@pytest.fixture(scope="session")
def reference_cfg() -> ModelConfig:
    return make_config()


@pytest.fixture(scope="session")
def tft_bank(reference_cfg: ModelConfig) -> FilterBank:
    return tft_filter_bank(reference_cfg)


@pytest.fixture(scope="session")
def optimized_bank(reference_cfg: ModelConfig) -> FilterBank:
    return design_bank(reference_cfg)

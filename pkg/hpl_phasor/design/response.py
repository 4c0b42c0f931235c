"""Frequency responses and transition-band gains of phasor filters."""

import logging
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

from .models import FilterBank, TransitionBand

logger = logging.getLogger(__name__)


def response_kernel(frequencies_hz: np.ndarray, n_taps: int, sampling_rate_hz: float) -> np.ndarray:
    """Matrix of exp(j*2*pi*f*n*Ts) for rows f and taps n = -N_h..N_h."""
    half = (n_taps - 1) // 2
    offsets = np.arange(-half, half + 1)
    return np.exp(2j * np.pi * np.outer(frequencies_hz, offsets) / sampling_rate_hz)


def frequency_response(
    coefficients: np.ndarray,
    frequencies_hz: Union[float, Iterable[float]],
    sampling_rate_hz: float,
) -> Union[complex, np.ndarray]:
    """Phasor gain H(f) = sum_n r[n] exp(j*2*pi*f*n*Ts).

    A real tone A*cos(2*pi*f*t + phi) contributes A*H(f)*exp(j*phi) to the
    phasor estimate: the factor 2 of the estimator cancels the 1/2 of the
    positive-frequency half of the tone. The passband-centre gain of a TFT
    filter is therefore exactly 1.

    Args:
        coefficients: Odd-length complex filter, taps n = -N_h..N_h
        frequencies_hz: One frequency or a sequence of frequencies
        sampling_rate_hz: Sampling rate fs

    Returns:
        Complex gain, scalar or array matching ``frequencies_hz``
    """
    coefficients = np.asarray(coefficients)
    if coefficients.ndim != 1 or coefficients.size % 2 == 0:
        raise ValueError(f"Filter must be a 1-D odd-length vector, got shape {coefficients.shape}")
    scalar = np.isscalar(frequencies_hz)
    freqs = np.atleast_1d(np.asarray(frequencies_hz, dtype=float))
    values = response_kernel(freqs, coefficients.size, sampling_rate_hz) @ coefficients
    return complex(values[0]) if scalar else values


def max_transition_gain(
    coefficients: np.ndarray,
    band: TransitionBand,
    grid_step_hz: float,
    sampling_rate_hz: float,
) -> float:
    """Largest |H(f)| over both transition-band intervals, endpoints included.

    Raises:
        ValueError: If the grid step is not positive or the band is empty
    """
    freqs = band.grid(grid_step_hz)
    return float(np.max(np.abs(frequency_response(coefficients, freqs, sampling_rate_hz))))


def gain_curves(
    bank: FilterBank,
    baseline: Optional[FilterBank] = None,
    orders: Optional[Iterable[int]] = None,
    start_hz: float = 0.0,
    stop_hz: Optional[float] = None,
    step_hz: float = 0.5,
) -> pd.DataFrame:
    """Plot-ready gain curves of the bank (and optionally a baseline).

    Returns:
        DataFrame with columns frequency_hz, h, gain and, when a baseline is
        given, baseline_gain
    """
    cfg = bank.cfg
    if stop_hz is None:
        stop_hz = (cfg.max_harmonic + 1) * cfg.nominal_frequency_hz
    count = int(np.floor((stop_hz - start_hz) / step_hz + 1e-9)) + 1
    freqs = start_hz + step_hz * np.arange(count)
    kernel = response_kernel(freqs, cfg.window_length, cfg.sampling_rate_hz)
    selected = list(orders) if orders is not None else [h for h in bank.orders if h >= 2]

    frames = []
    for h in selected:
        frame = pd.DataFrame({"frequency_hz": freqs, "h": h, "gain": np.abs(kernel @ bank.filters[h])})
        if baseline is not None:
            frame["baseline_gain"] = np.abs(kernel @ baseline.filters[h])
        frames.append(frame)
    logger.debug(f"Gain curves computed for orders {selected} over {count} frequencies")
    return pd.concat(frames, ignore_index=True)

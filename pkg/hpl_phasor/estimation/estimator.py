"""Centre-tagged sliding-window phasor estimation.

For each harmonic h the report at tag t is

    p_h(t) = 2 * exp(-j*2*pi*h*f0*t) * (r_h . S)

with S the N samples centred on t. Demodulation always uses the nominal f0;
off-nominal frequency shows up as a phase ramp.
"""

import logging
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..design.models import FilterBank
from .models import PhasorEstimate, PhasorSeries, SampleWindow

logger = logging.getLogger(__name__)


def _demodulation(bank: FilterBank, tags: np.ndarray) -> np.ndarray:
    orders = np.asarray(bank.orders, dtype=float)
    return 2.0 * np.exp(-2j * np.pi * bank.cfg.nominal_frequency_hz * np.outer(tags, orders))


def _apply(bank: FilterBank, windows: np.ndarray, tags: np.ndarray) -> np.ndarray:
    """Phasors for stacked windows (R x N) tagged at ``tags``."""
    return (windows @ bank.matrix.T) * _demodulation(bank, tags)


def estimate_window(window: SampleWindow, bank: FilterBank) -> List[PhasorEstimate]:
    """Phasor of every harmonic in the bank for one centred window.

    Raises:
        ValueError: If the window length differs from the bank's N
    """
    samples = np.asarray(window.samples, dtype=float)
    if samples.shape != (bank.window_length,):
        raise ValueError(f"Window has {samples.size} samples, bank expects {bank.window_length}")
    row = _apply(bank, samples[None, :], np.array([window.t_tag]))[0]
    return [PhasorEstimate(order=h, t_tag=float(window.t_tag), phasor=complex(p)) for h, p in zip(bank.orders, row)]


def _decimation(bank: FilterBank, reporting_rate_hz: Optional[float]) -> int:
    rate = bank.cfg.reporting_rate_hz if reporting_rate_hz is None else reporting_rate_hz
    ratio = bank.cfg.sampling_rate_hz / rate
    if rate <= 0 or abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
        raise ValueError(f"Reporting rate {rate} does not divide sampling rate {bank.cfg.sampling_rate_hz}")
    return int(round(ratio))


class PhasorStream:
    """Incremental estimator fed with arbitrary sample chunks.

    Reports start at the first full window and follow every fs/f_re samples,
    so the output depends only on sample positions, not on how the input is
    chunked. Only the samples still needed by future windows are retained.
    """

    def __init__(self, bank: FilterBank, start_time_s: float = 0.0, reporting_rate_hz: Optional[float] = None):
        self.bank = bank
        self.start_time_s = float(start_time_s)
        self.decimation = _decimation(bank, reporting_rate_hz)
        self._half = bank.cfg.half_window
        self._buffer = np.empty(0)
        self._buffer_start = 0
        self._next_center = self._half
        self.frames = 0

    def tag_of(self, index: np.ndarray) -> np.ndarray:
        return self.start_time_s + index / self.bank.cfg.sampling_rate_hz

    def push_series(self, chunk: Sequence[float]) -> PhasorSeries:
        data = np.concatenate([self._buffer, np.asarray(chunk, dtype=float)])
        last = self._buffer_start + data.size - 1
        centers = np.arange(self._next_center, last - self._half + 1, self.decimation)

        if centers.size:
            windows = sliding_window_view(data, self.bank.window_length)[centers - self._half - self._buffer_start]
            tags = self.tag_of(centers)
            phasors = _apply(self.bank, windows, tags)
            self._next_center = int(centers[-1]) + self.decimation
        else:
            tags = np.empty(0)
            phasors = np.empty((0, len(self.bank.orders)), dtype=complex)

        keep_from = max(self._buffer_start, self._next_center - self._half)
        self._buffer = data[keep_from - self._buffer_start:].copy()
        self._buffer_start = keep_from
        self.frames += int(centers.size)
        return PhasorSeries(tags=tags, orders=self.bank.orders, phasors=phasors)

    def push(self, chunk: Sequence[float]) -> List[List[PhasorEstimate]]:
        return self.push_series(chunk).reports()


def estimate_series(
    samples: Sequence[float],
    start_time_s: float,
    bank: FilterBank,
    reporting_rate_hz: Optional[float] = None,
) -> PhasorSeries:
    """All reports of a finished recording as arrays."""
    return PhasorStream(bank, start_time_s, reporting_rate_hz).push_series(samples)


def stream_estimate(
    samples: Sequence[float],
    start_time_s: float,
    bank: FilterBank,
    reporting_rate_hz: Optional[float] = None,
) -> List[List[PhasorEstimate]]:
    """One list of PhasorEstimate per report; fewer than N samples give no reports.

    Raises:
        ValueError: If fs / f_re is not an integer
    """
    series = estimate_series(samples, start_time_s, bank, reporting_rate_hz)
    if len(series) == 0:
        logger.warning(f"{len(samples)} samples do not fill one {bank.window_length}-sample window")
    return series.reports()


def measure_frame_time(bank: FilterBank, samples: Sequence[float], min_frames: int) -> Tuple[float, int]:
    """Mean wall-clock seconds per single-frame estimate.

    Frames are the report windows of ``samples``, cycled until at least
    ``min_frames`` have been timed.

    Returns:
        Tuple (mean seconds per frame, frames timed); (0.0, 0) without a full window
    """
    data = np.asarray(samples, dtype=float)
    stream = PhasorStream(bank)
    if data.size < bank.window_length:
        return 0.0, 0
    starts = np.arange(0, data.size - bank.window_length + 1, stream.decimation)
    windows = sliding_window_view(data, bank.window_length)[starts]
    tags = stream.tag_of(starts + bank.cfg.half_window)

    frames = 0
    began = time.perf_counter()
    while frames < min_frames:
        for window, tag in zip(windows, tags):
            _apply(bank, window[None, :], np.array([tag]))
            frames += 1
    elapsed = time.perf_counter() - began
    return elapsed / frames, frames

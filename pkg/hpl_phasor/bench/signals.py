"""Synthetic test waveforms with closed-form reference phasors.

Every generator describes harmonic h by a complex envelope p_h(t) relative to
nominal demodulation, so the component is Re(p_h(t) exp(j*2*pi*h*f0*t)).
Out-of-band interference (OBI) tones sit at h*f0 - f_re/2 for h = 2..H.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.models import ModelConfig

logger = logging.getLogger(__name__)

Seed = Union[int, Sequence[int]]
Envelope = Callable[[np.ndarray], np.ndarray]


class MultitoneParams(BaseModel):
    """Amplitudes and frequencies of the fundamental, harmonics and OBI tones."""

    model_config = ConfigDict(frozen=True)

    nominal_frequency_hz: float = Field(default=50.0, gt=0)
    reporting_rate_hz: float = Field(default=50.0, gt=0)
    max_harmonic: int = Field(default=13, ge=2)
    fundamental_amplitude_pu: float = Field(default=1.0, ge=0)
    harmonic_amplitude_pu: float = Field(default=0.1, ge=0)
    obi_amplitude_pu: float = Field(default=0.01, ge=0)
    fundamental_frequency_hz: Optional[float] = Field(
        default=None, gt=0, description="Actual system frequency; harmonics follow h times this (default f0)"
    )

    @classmethod
    def from_config(cls, cfg: ModelConfig, **overrides: float) -> "MultitoneParams":
        return cls(
            nominal_frequency_hz=cfg.nominal_frequency_hz,
            reporting_rate_hz=cfg.reporting_rate_hz,
            max_harmonic=cfg.max_harmonic,
            **overrides,
        )

    @property
    def system_frequency_hz(self) -> float:
        return self.fundamental_frequency_hz or self.nominal_frequency_hz

    def amplitude(self, h: int) -> float:
        return self.fundamental_amplitude_pu if h == 1 else self.harmonic_amplitude_pu

    def obi_frequency(self, h: int) -> float:
        return h * self.nominal_frequency_hz - 0.5 * self.reporting_rate_hz


@dataclass(frozen=True)
class ReferencePhasor:
    """True dynamic phasors p_h(t) of a generated waveform."""

    nominal_frequency_hz: float
    envelopes: Mapping[int, Envelope]

    @property
    def orders(self) -> List[int]:
        return sorted(self.envelopes)

    def __call__(self, h: int, t: Union[float, np.ndarray]) -> np.ndarray:
        return self.envelopes[h](np.asarray(t, dtype=float))

    def component(self, h: int, t: Union[float, np.ndarray]) -> np.ndarray:
        """Real waveform of harmonic h at times t."""
        t = np.asarray(t, dtype=float)
        return np.real(self(h, t) * np.exp(2j * np.pi * h * self.nominal_frequency_hz * t))


@dataclass(frozen=True)
class GeneratedSignal:
    samples: np.ndarray
    sampling_rate_hz: float
    start_time_s: float
    reference: ReferencePhasor
    step_time_s: Optional[float] = None
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def times(self) -> np.ndarray:
        return self.start_time_s + np.arange(self.samples.size) / self.sampling_rate_hz


def _sample_times(duration_s: float, sampling_rate_hz: float, start_time_s: float) -> np.ndarray:
    count = int(round(duration_s * sampling_rate_hz))
    return start_time_s + np.arange(count) / sampling_rate_hz


def _draw_phases(params: MultitoneParams, seed: Seed) -> Tuple[np.ndarray, np.ndarray]:
    """Harmonic phases for h = 1..H and OBI phases for h = 2..H, uniform on [-pi, pi]."""
    rng = np.random.default_rng(seed)
    harmonic = rng.uniform(-np.pi, np.pi, size=params.max_harmonic)
    obi = rng.uniform(-np.pi, np.pi, size=params.max_harmonic - 1)
    return harmonic, obi


def _check_nyquist(params: MultitoneParams, sampling_rate_hz: float, top_hz: float) -> None:
    top = max(top_hz, params.obi_frequency(params.max_harmonic))
    if top >= sampling_rate_hz / 2.0:
        raise ValueError(f"Component at {top:.1f} Hz is above the Nyquist frequency {sampling_rate_hz / 2.0} Hz")


def _modulation_warning(params: MultitoneParams, modulation_frequency_hz: float) -> Tuple[str, ...]:
    if modulation_frequency_hz > params.reporting_rate_hz / 2.0:
        message = (
            f"modulation frequency {modulation_frequency_hz} Hz exceeds half the reporting rate "
            f"({params.reporting_rate_hz / 2.0} Hz); reports alias the modulation"
        )
        logger.warning(message)
        return (message,)
    return ()


def _synthesize(
    params: MultitoneParams,
    envelopes: Dict[int, Envelope],
    obi_phases: np.ndarray,
    duration_s: float,
    sampling_rate_hz: float,
    start_time_s: float,
    warnings: Tuple[str, ...] = (),
) -> GeneratedSignal:
    reference = ReferencePhasor(nominal_frequency_hz=params.nominal_frequency_hz, envelopes=envelopes)
    t = _sample_times(duration_s, sampling_rate_hz, start_time_s)
    samples = np.zeros(t.size)
    for h in reference.orders:
        samples += reference.component(h, t)
    if params.obi_amplitude_pu > 0:
        for idx, h in enumerate(range(2, params.max_harmonic + 1)):
            samples += params.obi_amplitude_pu * np.cos(2 * np.pi * params.obi_frequency(h) * t + obi_phases[idx])
    return GeneratedSignal(
        samples=samples,
        sampling_rate_hz=sampling_rate_hz,
        start_time_s=start_time_s,
        reference=reference,
        warnings=warnings,
    )


def _steady(amplitude: float, phase: float, offset_hz: float) -> Envelope:
    def envelope(t: np.ndarray) -> np.ndarray:
        return amplitude * np.exp(1j * (2 * np.pi * offset_hz * t + phase)) * np.ones_like(t)

    return envelope


def gen_multitone(
    params: MultitoneParams, duration_s: float, sampling_rate_hz: float, seed: Seed, start_time_s: float = 0.0
) -> GeneratedSignal:
    """Fundamental, H-1 harmonics and H-1 OBI tones with seeded random phases.

    Harmonics run at h times the system frequency; the reference phasor then
    carries the exp(j*2*pi*h*(f - f0)*t) ramp of nominal demodulation.

    Raises:
        ValueError: If a component lies above the Nyquist frequency
    """
    f = params.system_frequency_hz
    _check_nyquist(params, sampling_rate_hz, params.max_harmonic * f)
    phases, obi_phases = _draw_phases(params, seed)
    envelopes = {
        h: _steady(params.amplitude(h), phases[h - 1], h * (f - params.nominal_frequency_hz))
        for h in range(1, params.max_harmonic + 1)
    }
    return _synthesize(params, envelopes, obi_phases, duration_s, sampling_rate_hz, start_time_s)


def _am(amplitude: float, phase: float, depth: float, modulation_hz: float) -> Envelope:
    def envelope(t: np.ndarray) -> np.ndarray:
        return amplitude * (1 + depth * np.cos(2 * np.pi * modulation_hz * t)) * np.exp(1j * phase)

    return envelope


def _pm(amplitude: float, phase: float, depth: float, modulation_hz: float) -> Envelope:
    def envelope(t: np.ndarray) -> np.ndarray:
        return amplitude * np.exp(1j * (depth * np.cos(2 * np.pi * modulation_hz * t - np.pi) + phase))

    return envelope


def _ramp(amplitude: float, phase: float, h: int, offset_hz: float, rate_hz_per_s: float) -> Envelope:
    def envelope(t: np.ndarray) -> np.ndarray:
        return amplitude * np.exp(1j * (2 * np.pi * h * offset_hz * t + np.pi * h * rate_hz_per_s * t**2 + phase))

    return envelope


def _depth(depth: float, h: int, scales_with_order: bool) -> float:
    return depth * h if scales_with_order else depth


def gen_am(
    params: MultitoneParams,
    sampling_rate_hz: float,
    duration_s: float,
    seed: Seed,
    modulation_frequency_hz: float,
    depth: float = 0.1,
    depth_scales_with_order: bool = True,
) -> GeneratedSignal:
    """Amplitude modulation A_h (1 + k_h cos(2*pi*fm*t)) of fundamental and harmonics, plus OBI.

    k_h is depth*h by default. Once k_h exceeds 1 the envelope passes through
    zero twice per modulation period and the reference phasor flips sign there.
    """
    _check_nyquist(params, sampling_rate_hz, params.max_harmonic * params.nominal_frequency_hz)
    phases, obi_phases = _draw_phases(params, seed)
    envelopes = {
        h: _am(params.amplitude(h), phases[h - 1], _depth(depth, h, depth_scales_with_order), modulation_frequency_hz)
        for h in range(1, params.max_harmonic + 1)
    }
    warnings = _modulation_warning(params, modulation_frequency_hz)
    return _synthesize(params, envelopes, obi_phases, duration_s, sampling_rate_hz, 0.0, warnings)


def gen_pm(
    params: MultitoneParams,
    sampling_rate_hz: float,
    duration_s: float,
    seed: Seed,
    modulation_frequency_hz: float,
    depth: float = 0.1,
    depth_scales_with_order: bool = True,
) -> GeneratedSignal:
    """Phase modulation k cos(2*pi*fm*t - pi) of fundamental and harmonics, plus OBI."""
    _check_nyquist(params, sampling_rate_hz, params.max_harmonic * params.nominal_frequency_hz)
    phases, obi_phases = _draw_phases(params, seed)
    envelopes = {
        h: _pm(params.amplitude(h), phases[h - 1], _depth(depth, h, depth_scales_with_order), modulation_frequency_hz)
        for h in range(1, params.max_harmonic + 1)
    }
    warnings = _modulation_warning(params, modulation_frequency_hz)
    return _synthesize(params, envelopes, obi_phases, duration_s, sampling_rate_hz, 0.0, warnings)


def gen_ramp(
    params: MultitoneParams,
    sampling_rate_hz: float,
    duration_s: float,
    seed: Seed,
    rate_hz_per_s: float = 1.0,
    start_frequency_hz: float = 49.5,
) -> GeneratedSignal:
    """Linear frequency ramp f(t) = f_start + R*t of fundamental and harmonics, plus OBI."""
    top = params.max_harmonic * max(start_frequency_hz, start_frequency_hz + rate_hz_per_s * duration_s)
    _check_nyquist(params, sampling_rate_hz, top)
    phases, obi_phases = _draw_phases(params, seed)
    offset = start_frequency_hz - params.nominal_frequency_hz
    envelopes = {
        h: _ramp(params.amplitude(h), phases[h - 1], h, offset, rate_hz_per_s)
        for h in range(1, params.max_harmonic + 1)
    }
    return _synthesize(params, envelopes, obi_phases, duration_s, sampling_rate_hz, 0.0)


def _stepped(amplitude: float, k_a: float, k_p: float) -> Envelope:
    def envelope(t: np.ndarray) -> np.ndarray:
        g = (t >= 0).astype(float)
        return amplitude * (1 + k_a * g) * np.exp(1j * k_p * g)

    return envelope


def gen_step(
    h: int,
    k_a: float,
    k_p: float,
    sampling_rate_hz: float,
    duration_s: float,
    nominal_frequency_hz: float = 50.0,
    harmonic_amplitude_pu: float = 0.1,
) -> GeneratedSignal:
    """Fundamental plus one harmonic, both stepping in amplitude and phase at t = 0.

    The record is centred on the step; g(t) is 0 before t = 0 and 1 from t = 0 on.
    """
    if h < 2 or h * nominal_frequency_hz >= sampling_rate_hz / 2.0:
        raise ValueError(f"Harmonic {h} is not representable at fs={sampling_rate_hz} Hz")
    lead = int(round(duration_s * sampling_rate_hz / 2.0))
    start = -lead / sampling_rate_hz
    envelopes = {1: _stepped(1.0, k_a, k_p), h: _stepped(harmonic_amplitude_pu, k_a, k_p)}
    reference = ReferencePhasor(nominal_frequency_hz=nominal_frequency_hz, envelopes=envelopes)
    t = _sample_times(duration_s, sampling_rate_hz, start)
    samples = reference.component(1, t) + reference.component(h, t)
    return GeneratedSignal(
        samples=samples,
        sampling_rate_hz=sampling_rate_hz,
        start_time_s=start,
        reference=reference,
        step_time_s=0.0,
    )


def noise_sigma(snr_db: float, fundamental_amplitude_pu: float = 1.0) -> float:
    """sigma with SNR = 10 log10(A1^2 / (2 sigma^2))."""
    return fundamental_amplitude_pu / np.sqrt(2.0 * 10.0 ** (snr_db / 10.0))


def add_noise(samples: np.ndarray, snr_db: float, seed: Seed, fundamental_amplitude_pu: float = 1.0) -> np.ndarray:
    """Add zero-mean white Gaussian noise at the given SNR; infinite SNR returns a copy."""
    samples = np.asarray(samples, dtype=float)
    if np.isinf(snr_db) and snr_db > 0:
        return samples.copy()
    rng = np.random.default_rng(seed)
    return samples + rng.normal(0.0, noise_sigma(snr_db, fundamental_amplitude_pu), size=samples.shape)

"""Accuracy metrics: TVE, step response time and waveform residual."""

from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..estimation.models import PhasorEstimate

TVE_LIMIT_PERCENT = 1.0

Phasorish = Union[PhasorEstimate, complex]


def _phasor(value: Phasorish) -> complex:
    return value.phasor if isinstance(value, PhasorEstimate) else complex(value)


def tve(estimate: Phasorish, reference: complex) -> float:
    """Total vector error in percent, 100 |est - ref| / |ref|.

    Raises:
        ValueError: If the reference is zero
    """
    reference = complex(reference)
    if reference == 0:
        raise ValueError("TVE is undefined for a zero reference phasor")
    return 100.0 * abs(_phasor(estimate) - reference) / abs(reference)


def tve_series(estimates: np.ndarray, references: np.ndarray) -> np.ndarray:
    """Element-wise TVE in percent for aligned phasor arrays."""
    estimates = np.asarray(estimates, dtype=complex)
    references = np.asarray(references, dtype=complex)
    magnitude = np.abs(references)
    if np.any(magnitude == 0):
        raise ValueError("TVE is undefined for a zero reference phasor")
    return 100.0 * np.abs(estimates - references) / magnitude


def response_time(
    tags: Sequence[float],
    tve_percent: Sequence[float],
    step_time_s: Optional[float] = None,
    threshold_percent: float = TVE_LIMIT_PERCENT,
) -> float:
    """Seconds between the first and last report whose TVE exceeds the threshold.

    Args:
        tags: Report times, ascending
        tve_percent: TVE of each report
        step_time_s: Step instant; when given, only the run of exceeding reports
            closest to it counts
        threshold_percent: TVE limit (1% by default)

    Returns:
        0.0 when no report exceeds the threshold
    """
    tags = np.asarray(tags, dtype=float)
    over = np.asarray(tve_percent, dtype=float) > threshold_percent
    if not over.any():
        return 0.0
    hits = np.flatnonzero(over)
    if step_time_s is None:
        return float(tags[hits[-1]] - tags[hits[0]])

    # contiguous runs of exceeding reports; keep the one nearest the step
    breaks = np.flatnonzero(np.diff(hits) > 1)
    runs = np.split(hits, breaks + 1)

    def distance(run: np.ndarray) -> float:
        first, last = tags[run[0]], tags[run[-1]]
        if first <= step_time_s <= last:
            return 0.0
        return float(min(abs(first - step_time_s), abs(last - step_time_s)))

    nearest = min(runs, key=distance)
    return float(tags[nearest[-1]] - tags[nearest[0]])


def reconstruct(phasor: complex, h: int, times: np.ndarray, nominal_frequency_hz: float) -> np.ndarray:
    """Waveform Re(p exp(j*2*pi*h*f0*t)) rebuilt from one phasor."""
    return np.real(phasor * np.exp(2j * np.pi * h * nominal_frequency_hz * np.asarray(times, dtype=float)))


def _residual_terms(
    components: Mapping[int, np.ndarray],
    estimates: Sequence[PhasorEstimate],
    times: np.ndarray,
    nominal_frequency_hz: float,
) -> Dict[int, Tuple[float, float]]:
    """Squared reconstruction error and squared energy per order with a true component."""
    terms = {}
    for estimate in estimates:
        if estimate.order not in components:
            continue
        truth = np.asarray(components[estimate.order], dtype=float)
        rebuilt = reconstruct(estimate.phasor, estimate.order, times, nominal_frequency_hz)
        terms[estimate.order] = (float(np.sum((truth - rebuilt) ** 2)), float(np.sum(truth**2)))
    return terms


def residual(
    components: Mapping[int, np.ndarray],
    estimates: Sequence[PhasorEstimate],
    times: np.ndarray,
    nominal_frequency_hz: float,
) -> Dict[int, float]:
    """Window residual in percent, per harmonic order.

    Every estimate is turned back into a waveform over ``times`` and compared
    with the true component of the same order::

        Res_h = 100 * sqrt(sum (s_h - s^_h)^2 / sum s_h^2)

    Args:
        components: True samples per harmonic order over the window
        estimates: Estimated phasors; orders without a true component are ignored
        times: Sample instants of the window
        nominal_frequency_hz: Demodulation frequency f0

    Returns:
        Mapping of order to Res_h

    Raises:
        ValueError: If a matched component carries no energy
    """
    result = {}
    for order, (error, energy) in _residual_terms(components, estimates, times, nominal_frequency_hz).items():
        if energy == 0:
            raise ValueError(f"Residual is undefined for the zero-energy component h={order}")
        result[order] = 100.0 * float(np.sqrt(error / energy))
    return result


def pooled_residual(
    components: Mapping[int, np.ndarray],
    estimates: Sequence[PhasorEstimate],
    times: np.ndarray,
    nominal_frequency_hz: float,
) -> float:
    """Residual in percent with error and energy summed over every matched order."""
    terms = _residual_terms(components, estimates, times, nominal_frequency_hz).values()
    error = sum(e for e, _ in terms)
    energy = sum(s for _, s in terms)
    if energy == 0:
        raise ValueError("Residual is undefined for zero-energy components")
    return 100.0 * float(np.sqrt(error / energy))

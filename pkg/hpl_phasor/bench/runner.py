"""Scenario sweeps comparing an optimized bank against a baseline bank."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import settings
from ..core.models import ConfigError
from ..design.models import FilterBank
from ..estimation.estimator import estimate_series
from ..estimation.models import PhasorSeries
from .metrics import response_time, tve_series
from .models import ScenarioPoint, ScenarioResult, ScenarioSpec, TraceRow
from .signals import (
    GeneratedSignal,
    MultitoneParams,
    ReferencePhasor,
    add_noise,
    gen_am,
    gen_multitone,
    gen_pm,
    gen_ramp,
    gen_step,
)

logger = logging.getLogger(__name__)

# modulation below this frequency gets at least one full period per run
SLOW_MODULATION_HZ = 0.5


@dataclass
class _PointOutcome:
    points: List[ScenarioPoint] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    trace: List[TraceRow] = field(default_factory=list)


def _params(spec: ScenarioSpec, **overrides: float) -> MultitoneParams:
    amplitudes = {
        "fundamental_amplitude_pu": spec.fundamental_amplitude_pu,
        "harmonic_amplitude_pu": spec.harmonic_amplitude_pu,
        "obi_amplitude_pu": spec.obi_amplitude_pu,
    }
    amplitudes.update(overrides)
    return MultitoneParams.from_config(spec.model, **amplitudes)


def _modulated_duration(spec: ScenarioSpec, modulation_hz: float) -> float:
    if modulation_hz >= SLOW_MODULATION_HZ:
        return spec.run_seconds
    window_s = spec.model.window_length / spec.model.sampling_rate_hz
    return max(spec.run_seconds, 1.0 / modulation_hz + window_s)


def generate_point(spec: ScenarioSpec, index: int, value: float) -> GeneratedSignal:
    """Signal of sweep point ``index`` with sweep variable ``value``.

    Phases are drawn from the seed [rng_seed, index]; noise uses [rng_seed, index, 1].
    """
    cfg = spec.model
    fs = cfg.sampling_rate_hz
    seed = [spec.rng_seed, index]
    kind = spec.kind
    snr_db = spec.snr_db

    if kind == "obi_amplitude_sweep":
        signal = gen_multitone(_params(spec, obi_amplitude_pu=value), spec.run_seconds, fs, seed)
    elif kind == "harmonic_amplitude_sweep":
        signal = gen_multitone(_params(spec, harmonic_amplitude_pu=value), spec.run_seconds, fs, seed)
    elif kind == "noise_obi":
        signal = gen_multitone(_params(spec), spec.run_seconds, fs, seed)
        snr_db = value
    elif kind == "freq_deviation_obi":
        signal = gen_multitone(_params(spec, fundamental_frequency_hz=value), spec.run_seconds, fs, seed)
    elif kind in ("am_obi", "pm_obi"):
        generator = gen_am if kind == "am_obi" else gen_pm
        signal = generator(
            _params(spec),
            fs,
            _modulated_duration(spec, value),
            seed,
            modulation_frequency_hz=value,
            depth=spec.modulation_depth,
            depth_scales_with_order=spec.depth_scales_with_order,
        )
    elif kind == "ramp_obi":
        signal = gen_ramp(
            _params(spec),
            fs,
            spec.ramp_seconds,
            seed,
            rate_hz_per_s=spec.ramp_rate_hz_per_s,
            start_frequency_hz=value,
        )
    else:
        k_a, k_p = (spec.step_amplitude, 0.0) if kind == "amp_step" else (0.0, spec.step_phase_rad)
        signal = gen_step(
            int(value),
            k_a,
            k_p,
            fs,
            spec.run_seconds,
            nominal_frequency_hz=cfg.nominal_frequency_hz,
            harmonic_amplitude_pu=spec.harmonic_amplitude_pu,
        )

    if snr_db is not None:
        noisy = add_noise(signal.samples, snr_db, seed + [1], spec.fundamental_amplitude_pu)
        signal = GeneratedSignal(
            samples=noisy,
            sampling_rate_hz=signal.sampling_rate_hz,
            start_time_s=signal.start_time_s,
            reference=signal.reference,
            step_time_s=signal.step_time_s,
            warnings=signal.warnings,
        )
    return signal


def window_residuals(
    series: PhasorSeries, reference: ReferencePhasor, orders: Sequence[int], bank: FilterBank
) -> np.ndarray:
    """Residual in percent of every report window, one column per order.

    Returns:
        Array of shape (reports, len(orders))

    Raises:
        ValueError: If a component carries no energy over some window
    """
    cfg = bank.cfg
    times = series.tags[:, None] + cfg.sample_offsets()[None, :] * cfg.sampling_period_s
    columns = []
    for h in orders:
        truth = reference.component(h, times)
        carrier = np.exp(2j * np.pi * h * cfg.nominal_frequency_hz * times)
        rebuilt = np.real(series.column(h)[:, None] * carrier)
        energy = np.sum(truth**2, axis=1)
        if np.any(energy == 0):
            raise ValueError(f"Residual is undefined for the zero-energy component h={h}")
        columns.append(100.0 * np.sqrt(np.sum((truth - rebuilt) ** 2, axis=1) / energy))
    return np.column_stack(columns) if columns else np.empty((len(series), 0))


def reference_mask(truth: np.ndarray, floor_ratio: float) -> np.ndarray:
    """Reports whose reference magnitude reaches ``floor_ratio`` of the run's largest."""
    magnitude = np.abs(truth)
    return magnitude >= floor_ratio * magnitude.max()


def _kept(spec: ScenarioSpec, count: int) -> slice:
    if spec.is_step:
        return slice(0, count)
    edge = spec.edge_reports
    if count <= 2 * edge:
        raise ConfigError(
            f"Run of {spec.run_seconds} s yields {count} reports, too few after dropping {edge} at each end"
        )
    return slice(edge, count - edge)


def _run_point(
    spec: ScenarioSpec,
    bank: FilterBank,
    baseline: FilterBank,
    orders: Sequence[int],
    index: int,
    value: float,
) -> _PointOutcome:
    signal = generate_point(spec, index, value)
    outcome = _PointOutcome(warnings=list(signal.warnings))
    series = estimate_series(signal.samples, signal.start_time_s, bank)
    base_series = estimate_series(signal.samples, signal.start_time_s, baseline)
    kept = _kept(spec, len(series))
    tags = series.tags[kept]

    point_orders = [int(value)] if spec.is_step else list(orders)
    residual = window_residuals(series, signal.reference, point_orders, bank)[kept]
    base_residual = window_residuals(base_series, signal.reference, point_orders, baseline)[kept]

    for column, h in enumerate(point_orders):
        truth = signal.reference(h, tags)
        mask = reference_mask(truth, spec.reference_floor_ratio)
        if not mask.all():
            outcome.warnings.append(
                f"h={h}: reports with |p_h| below {spec.reference_floor_ratio:g} of its peak left out of TVE"
            )
        errors = tve_series(series.column(h)[kept][mask], truth[mask])
        base_errors = tve_series(base_series.column(h)[kept][mask], truth[mask])
        report_tags = tags[mask]
        timing: Dict[str, float] = {}
        if spec.is_step:
            timing = {
                "response_time_ms": 1e3 * response_time(report_tags, errors, signal.step_time_s),
                "baseline_response_time_ms": 1e3 * response_time(report_tags, base_errors, signal.step_time_s),
            }
        point = ScenarioPoint(
            sweep_index=index,
            sweep_value=value,
            h=h,
            max_tve_percent=float(errors.max()),
            baseline_max_tve_percent=float(base_errors.max()),
            max_residual_percent=float(residual[:, column].max()),
            baseline_max_residual_percent=float(base_residual[:, column].max()),
            **timing,
        )
        outcome.points.append(point)
        if spec.trace:
            outcome.trace.extend(
                TraceRow(sweep_value=value, t_tag=float(t), h=h, tve_percent=float(e), baseline_tve_percent=float(b))
                for t, e, b in zip(report_tags, errors, base_errors)
            )
    return outcome


def _check_banks(spec: ScenarioSpec, bank: FilterBank, baseline: FilterBank) -> List[int]:
    if bank.cfg != baseline.cfg:
        raise ConfigError("Bank and baseline were designed for different model configurations")
    if spec.model != bank.cfg:
        raise ConfigError("Scenario model differs from the bank's model configuration")
    orders = [h for h in bank.orders if h >= 2 and h in baseline.orders]
    if not orders:
        raise ConfigError("Banks share no harmonic order above the fundamental")
    return orders


def run_scenario(
    spec: ScenarioSpec, bank: FilterBank, baseline: FilterBank, trace: Optional[bool] = None
) -> ScenarioResult:
    """Run every sweep point of a scenario through both banks.

    Points run in a thread pool capped by ``settings.threads`` and are merged
    by sweep index, so the result does not depend on scheduling.

    Args:
        spec: Scenario definition
        bank: Bank under test
        baseline: Reference bank (normally the TFT bank)
        trace: Override of ``spec.trace``

    Returns:
        ScenarioResult with per-point rows and per-harmonic maxima

    Raises:
        ConfigError: If the banks or the scenario disagree on the model config
    """
    if trace is not None:
        spec = spec.model_copy(update={"trace": trace})
    orders = _check_banks(spec, bank, baseline)
    values = spec.sweep_values()
    logger.info(f"Running scenario {spec.kind} over {len(values)} point(s) with seed {spec.rng_seed}")

    def work(item: Tuple[int, float]) -> _PointOutcome:
        return _run_point(spec, bank, baseline, orders, item[0], item[1])

    workers = max(1, min(settings.threads, len(values)))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        outcomes = list(executor.map(work, enumerate(values)))

    points = [p for outcome in outcomes for p in outcome.points]
    warnings = sorted({w for outcome in outcomes for w in outcome.warnings})
    rows = [r for outcome in outcomes for r in outcome.trace] if spec.trace else None
    result = ScenarioResult.from_points(spec, points, warnings, rows)
    worst = max(result.summary, key=lambda s: s.max_tve_percent)
    logger.info(
        f"Scenario {spec.kind} finished: worst h={worst.h} max TVE {worst.max_tve_percent:.4f}% "
        f"(baseline {worst.baseline_max_tve_percent:.4f}%)"
    )
    return result

import math
from typing import Dict, List, Literal, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.models import ModelConfig

SCENARIO_FORMAT_VERSION = 1

ScenarioKind = Literal[
    "obi_amplitude_sweep",
    "harmonic_amplitude_sweep",
    "noise_obi",
    "freq_deviation_obi",
    "am_obi",
    "pm_obi",
    "ramp_obi",
    "amp_step",
    "phase_step",
]

STEP_KINDS = ("amp_step", "phase_step")

POINT_COLUMNS = [
    "sweep_value",
    "h",
    "max_tve_percent",
    "baseline_max_tve_percent",
    "response_time_ms",
    "baseline_response_time_ms",
    "max_residual_percent",
    "baseline_max_residual_percent",
]
SUMMARY_COLUMNS = [
    "h",
    "max_tve_percent",
    "baseline_max_tve_percent",
    "tve_ratio",
    "max_response_time_ms",
    "baseline_max_response_time_ms",
    "max_residual_percent",
]
TRACE_COLUMNS = ["sweep_value", "t_tag", "h", "tve_percent", "baseline_tve_percent"]


class SweepRange(BaseModel):
    """Inclusive arithmetic range start, start+step, ..., stop."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    start: float
    stop: float
    step: float = Field(..., gt=0)

    @model_validator(mode="after")
    def check_order(self) -> "SweepRange":
        if self.stop < self.start:
            raise ValueError(f"Sweep stop {self.stop} is below start {self.start}")
        return self

    def values(self) -> List[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        points = [round(self.start + i * self.step, 12) for i in range(count + 1)]
        if self.stop - points[-1] > 1e-9 * max(1.0, abs(self.stop)):
            points.append(self.stop)
        return points


def default_sweep(kind: str, cfg: ModelConfig) -> Optional[SweepRange]:
    """Sweep used when a scenario file leaves ``sweep`` out."""
    f0 = cfg.nominal_frequency_hz
    defaults = {
        "obi_amplitude_sweep": SweepRange(start=0.001, stop=0.05, step=0.001),
        "harmonic_amplitude_sweep": SweepRange(start=0.08, stop=0.12, step=0.005),
        "noise_obi": SweepRange(start=50.0, stop=80.0, step=5.0),
        "freq_deviation_obi": SweepRange(start=f0 - 0.5, stop=f0 + 0.5, step=0.1),
        "am_obi": SweepRange(start=0.1, stop=2.0, step=0.1),
        "pm_obi": SweepRange(start=0.1, stop=2.0, step=0.1),
        "amp_step": SweepRange(start=2, stop=cfg.max_harmonic, step=1),
        "phase_step": SweepRange(start=2, stop=cfg.max_harmonic, step=1),
    }
    return defaults.get(kind)


class ScenarioSpec(BaseModel):
    """One benchmark scenario: signal family, sweep and seed.

    The sweep variable depends on ``kind``: OBI amplitude (p.u.), harmonic
    amplitude (p.u.), SNR (dB), fundamental frequency (Hz), modulation
    frequency (Hz) or harmonic order for the step tests. Ramps do not sweep.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    format_version: Literal[1] = SCENARIO_FORMAT_VERSION
    kind: ScenarioKind
    rng_seed: int = Field(..., description="Seed of the random phases and noise; sweep point i uses [rng_seed, i]")
    model: ModelConfig = Field(default_factory=ModelConfig)
    sweep: Optional[SweepRange] = Field(default=None, description="Sweep override; default depends on kind")
    fundamental_amplitude_pu: float = Field(default=1.0, gt=0)
    harmonic_amplitude_pu: float = Field(default=0.1, gt=0)
    obi_amplitude_pu: float = Field(default=0.01, ge=0)
    snr_db: Optional[float] = Field(default=None, gt=0, description="Extra white noise for non-noise kinds")
    modulation_depth: float = Field(default=0.1, ge=0, description="k_m of the fundamental")
    depth_scales_with_order: bool = Field(default=True, description="Use k_m*h for harmonic h")
    reference_floor_ratio: float = Field(
        default=0.1,
        ge=0,
        lt=1,
        description="Reports with |p_h| below this fraction of the largest |p_h| in the run are left out of TVE",
    )
    ramp_start_hz: float = Field(default=49.5, gt=0)
    ramp_rate_hz_per_s: float = Field(default=1.0, gt=0)
    ramp_seconds: float = Field(default=1.0, gt=0)
    step_amplitude: float = Field(default=0.1, description="k_a of the amplitude step")
    step_phase_rad: float = Field(default=-math.pi / 18, description="k_p of the phase step")
    run_seconds: float = Field(default=2.0, gt=0, description="Record length per sweep point")
    edge_reports: int = Field(default=2, ge=0, description="Reports dropped at each end of non-step runs")
    trace: bool = Field(default=False, description="Keep per-report TVE rows")

    @model_validator(mode="after")
    def check_sweep(self) -> "ScenarioSpec":
        if self.kind == "ramp_obi":
            if self.sweep is not None:
                raise ValueError("ramp_obi runs a single ramp and takes no sweep")
            return self
        values = self.sweep_values()
        low, high = min(values), max(values)
        f0 = self.model.nominal_frequency_hz
        if self.kind in ("obi_amplitude_sweep",) and low < 0:
            raise ValueError("OBI amplitudes must be nonnegative")
        if self.kind == "harmonic_amplitude_sweep" and low <= 0:
            raise ValueError("Harmonic amplitudes must be positive")
        if self.kind == "noise_obi" and low <= 0:
            raise ValueError("SNR values must be positive dB")
        deviation = max(abs(low - f0), abs(high - f0))
        if self.kind == "freq_deviation_obi" and (low <= 0 or deviation >= self.model.reporting_rate_hz / 2):
            raise ValueError(f"Fundamental frequencies must stay within f_re/2 of {f0} Hz")
        if self.kind in ("am_obi", "pm_obi") and low <= 0:
            raise ValueError("Modulation frequencies must be positive")
        if self.kind in STEP_KINDS:
            if any(v != int(v) for v in values) or low < 2 or high > self.model.max_harmonic:
                raise ValueError(f"Step sweeps run over integer orders 2..{self.model.max_harmonic}")
        return self

    @property
    def is_step(self) -> bool:
        return self.kind in STEP_KINDS

    def sweep_values(self) -> List[float]:
        if self.kind == "ramp_obi":
            return [self.ramp_start_hz]
        sweep = self.sweep or default_sweep(self.kind, self.model)
        assert sweep is not None
        return sweep.values()

    def with_seed(self, seed: int) -> "ScenarioSpec":
        return self.model_copy(update={"rng_seed": seed})


class ScenarioPoint(BaseModel):
    """Result of one harmonic at one sweep point."""

    sweep_index: int
    sweep_value: float
    h: int
    max_tve_percent: float = Field(..., ge=0)
    baseline_max_tve_percent: float = Field(..., ge=0)
    response_time_ms: Optional[float] = Field(default=None, ge=0)
    baseline_response_time_ms: Optional[float] = Field(default=None, ge=0)
    max_residual_percent: Optional[float] = Field(default=None, ge=0)
    baseline_max_residual_percent: Optional[float] = Field(default=None, ge=0)


class TraceRow(BaseModel):
    sweep_value: float
    t_tag: float
    h: int
    tve_percent: float
    baseline_tve_percent: float


class HarmonicSummary(BaseModel):
    """Per-harmonic maxima across the whole sweep."""

    h: int
    max_tve_percent: float
    baseline_max_tve_percent: float
    max_response_time_ms: Optional[float] = None
    baseline_max_response_time_ms: Optional[float] = None
    max_residual_percent: Optional[float] = None

    @property
    def tve_ratio(self) -> float:
        if self.baseline_max_tve_percent == 0:
            return 0.0 if self.max_tve_percent == 0 else math.inf
        return self.max_tve_percent / self.baseline_max_tve_percent


class ScenarioResult(BaseModel):
    kind: ScenarioKind
    rng_seed: int
    grid: List[float]
    points: List[ScenarioPoint]
    summary: List[HarmonicSummary]
    warnings: List[str] = Field(default_factory=list)
    trace: Optional[List[TraceRow]] = None

    @classmethod
    def from_points(
        cls,
        spec: ScenarioSpec,
        points: List[ScenarioPoint],
        warnings: List[str],
        trace: Optional[List[TraceRow]] = None,
    ) -> "ScenarioResult":
        by_order: Dict[int, List[ScenarioPoint]] = {}
        for point in points:
            by_order.setdefault(point.h, []).append(point)
        summary = [_summarize(h, rows) for h, rows in sorted(by_order.items())]
        return cls(
            kind=spec.kind,
            rng_seed=spec.rng_seed,
            grid=spec.sweep_values(),
            points=points,
            summary=summary,
            warnings=warnings,
            trace=trace,
        )

    def summary_for(self, h: int) -> HarmonicSummary:
        for row in self.summary:
            if row.h == h:
                return row
        raise KeyError(f"No summary for harmonic {h}")

    def points_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.model_dump() for p in self.points], columns=POINT_COLUMNS)

    def summary_frame(self) -> pd.DataFrame:
        rows = [{**s.model_dump(), "tve_ratio": s.tve_ratio} for s in self.summary]
        return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)

    def trace_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.trace or []], columns=TRACE_COLUMNS)


def _optional_max(values: List[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return max(present) if present else None


def _summarize(h: int, rows: List[ScenarioPoint]) -> HarmonicSummary:
    return HarmonicSummary(
        h=h,
        max_tve_percent=max(r.max_tve_percent for r in rows),
        baseline_max_tve_percent=max(r.baseline_max_tve_percent for r in rows),
        max_response_time_ms=_optional_max([r.response_time_ms for r in rows]),
        baseline_max_response_time_ms=_optional_max([r.baseline_response_time_ms for r in rows]),
        max_residual_percent=_optional_max([r.max_residual_percent for r in rows]),
    )

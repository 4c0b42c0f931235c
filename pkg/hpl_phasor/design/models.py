from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.models import ModelConfig


class DesignOptions(BaseModel):
    """Tuning of the multiplier search and gain evaluation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    grid_step_hz: float = Field(default=0.1, gt=0, description="Frequency step of the transition-band gain grid")
    search_min: float = Field(default=0.2, gt=0, description="Lower end of the coarse multiplier grid")
    search_max: float = Field(default=20.0, gt=0, description="Upper end of the coarse multiplier grid")
    search_ratio: float = Field(default=1.05, gt=1, description="Multiplicative step of the coarse grid")
    refine_initial_step: float = Field(default=0.04, gt=0, description="First coordinate-refinement step")
    refine_resolution: float = Field(default=0.005, gt=0, description="Smallest coordinate-refinement step")
    polish: bool = Field(default=True, description="Polish the refined point with scipy.optimize (SLSQP, Nelder-Mead)")
    polish_max_iter: int = Field(default=400, ge=1, description="Iteration cap of each polish stage")
    passband_min: float = Field(default=0.9, description="Lowest accepted gain at h*f0")
    passband_max: float = Field(default=1.1, description="Highest accepted gain at h*f0")
    tie_tolerance: float = Field(default=1e-6, ge=0, description="Objective values this close count as ties")
    orders: Optional[List[int]] = Field(default=None, description="Harmonics to optimize (default 2..H)")

    @model_validator(mode="after")
    def check_ranges(self) -> "DesignOptions":
        if self.search_min >= self.search_max:
            raise ValueError("search_min must be below search_max")
        if self.passband_min >= self.passband_max:
            raise ValueError("passband_min must be below passband_max")
        if self.refine_resolution > self.refine_initial_step:
            raise ValueError("refine_resolution must not exceed refine_initial_step")
        return self


class MultiplierSet(BaseModel):
    """Per-harmonic multipliers y_{h,k}, stored as k = 1..K+1 lists keyed by h."""

    model_config = ConfigDict(frozen=True)

    values: Dict[int, List[float]] = Field(default_factory=dict)

    @field_validator("values")
    @classmethod
    def check_values(cls, v: Dict[int, List[float]]) -> Dict[int, List[float]]:
        for order, ys in v.items():
            for idx, y in enumerate(ys):
                if not y > 0:
                    raise ValueError(f"Multiplier y[{order},{idx + 1}] must be positive, got {y}")
                # k = idx + 1 is even
                if idx % 2 == 1 and y != 1.0:
                    raise ValueError(f"Even multiplier y[{order},{idx + 1}] is fixed at 1, got {y}")
        return v

    @classmethod
    def unit(cls, orders: Sequence[int], n_terms: int) -> "MultiplierSet":
        return cls(values={int(h): [1.0] * n_terms for h in orders})

    def for_order(self, h: int, n_terms: int) -> Tuple[float, ...]:
        ys = self.values.get(h)
        if ys is None:
            return (1.0,) * n_terms
        if len(ys) != n_terms:
            raise ValueError(f"Order {h} has {len(ys)} multipliers, expected {n_terms}")
        return tuple(ys)


class TransitionBand(BaseModel):
    """Frequency intervals between the h-th passband edge and its neighbours."""

    model_config = ConfigDict(frozen=True)

    order: int
    lower: Tuple[float, float]
    upper: Tuple[float, float]

    @classmethod
    def for_order(cls, cfg: ModelConfig, h: int) -> "TransitionBand":
        f0 = cfg.nominal_frequency_hz
        half = cfg.reporting_rate_hz / 2.0
        return cls(order=h, lower=((h - 1) * f0, h * f0 - half), upper=(h * f0 + half, (h + 1) * f0))

    @property
    def intervals(self) -> List[Tuple[float, float]]:
        return [self.lower, self.upper]

    def grid(self, step_hz: float) -> np.ndarray:
        """Frequencies over both intervals at ``step_hz``, endpoints included.

        Raises:
            ValueError: If the step is not positive or an interval is empty
        """
        if step_hz <= 0:
            raise ValueError(f"Grid step must be positive, got {step_hz}")
        points = []
        for lo, hi in self.intervals:
            if not hi > lo:
                raise ValueError(f"Empty transition band interval [{lo}, {hi}] for order {self.order}")
            count = int(np.floor((hi - lo) / step_hz + 1e-9)) + 1
            freqs = lo + step_hz * np.arange(count)
            if hi - freqs[-1] > 1e-9 * max(1.0, hi):
                freqs = np.append(freqs, hi)
            else:
                freqs[-1] = hi
            points.append(freqs)
        return np.concatenate(points)


class DesignRow(BaseModel):
    """Design outcome for one harmonic order."""

    order: int
    tft_max_gain: float
    optimized_max_gain: float
    reduction: float = Field(..., description="1 - optimized/tft")
    multipliers: List[float]
    free_multipliers: int
    grid_step_hz: float
    passband_gain: float = Field(..., description="Optimized gain at h*f0")
    passband_guard_active: bool = False
    improved: bool = True
    warning: Optional[str] = None

    @property
    def reduction_percent(self) -> float:
        return 100.0 * self.reduction

    @classmethod
    def from_gains(
        cls,
        order: int,
        tft_max_gain: float,
        optimized_max_gain: float,
        multipliers: Sequence[float],
        grid_step_hz: float,
        passband_gain: float,
        free_multipliers: int,
        passband_guard_active: bool = False,
        improved: bool = True,
        warning: Optional[str] = None,
    ) -> "DesignRow":
        reduction = 1.0 - optimized_max_gain / tft_max_gain if tft_max_gain > 0 else 0.0
        return cls(
            order=order,
            tft_max_gain=tft_max_gain,
            optimized_max_gain=optimized_max_gain,
            reduction=reduction,
            multipliers=[float(y) for y in multipliers],
            free_multipliers=free_multipliers,
            grid_step_hz=grid_step_hz,
            passband_gain=passband_gain,
            passband_guard_active=passband_guard_active,
            improved=improved,
            warning=warning,
        )


class DesignReport(BaseModel):
    """Per-harmonic transition-band gains before and after optimization."""

    grid_step_hz: float
    rows: List[DesignRow] = Field(default_factory=list)

    def row(self, h: int) -> DesignRow:
        for row in self.rows:
            if row.order == h:
                return row
        raise KeyError(f"No design row for order {h}")

    @property
    def warnings(self) -> List[str]:
        return [f"h={row.order}: {row.warning}" for row in self.rows if row.warning]

    def to_table(self) -> str:
        lines = [f"{'h':>3}  {'TFT gain':>9}  {'optimized':>9}  {'reduction':>9}  multipliers"]
        for row in self.rows:
            ys = ", ".join(f"{y:.3f}" for y in row.multipliers)
            flag = "  !" if row.warning else ""
            lines.append(
                f"{row.order:>3}  {row.tft_max_gain:>9.4f}  {row.optimized_max_gain:>9.4f}  "
                f"{row.reduction_percent:>8.1f}%  [{ys}]{flag}"
            )
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Zero-order phasor filters r_h (length N, taps n = -N_h..N_h) per harmonic."""

    cfg: ModelConfig
    filters: Dict[int, np.ndarray]
    multipliers: MultiplierSet
    design_report: Optional[DesignReport] = None
    kind: str = "tft"
    _matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        for h, coefficients in self.filters.items():
            if coefficients.shape != (self.cfg.window_length,):
                raise ValueError(
                    f"Filter for order {h} has shape {coefficients.shape}, expected ({self.cfg.window_length},)"
                )
        matrix = np.vstack([self.filters[h] for h in self.orders]).astype(complex)
        matrix.setflags(write=False)
        object.__setattr__(self, "_matrix", matrix)

    @property
    def orders(self) -> List[int]:
        return sorted(self.filters)

    @property
    def window_length(self) -> int:
        return self.cfg.window_length

    @property
    def matrix(self) -> np.ndarray:
        """Filters stacked as rows in ascending order."""
        return self._matrix

from .metrics import TVE_LIMIT_PERCENT, pooled_residual, reconstruct, residual, response_time, tve, tve_series
from .models import (
    HarmonicSummary,
    ScenarioKind,
    ScenarioPoint,
    ScenarioResult,
    ScenarioSpec,
    SweepRange,
    TraceRow,
    default_sweep,
)
from .runner import generate_point, reference_mask, run_scenario, window_residuals
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
    noise_sigma,
)

__all__ = [
    "GeneratedSignal",
    "HarmonicSummary",
    "MultitoneParams",
    "ReferencePhasor",
    "ScenarioKind",
    "ScenarioPoint",
    "ScenarioResult",
    "ScenarioSpec",
    "SweepRange",
    "TVE_LIMIT_PERCENT",
    "TraceRow",
    "add_noise",
    "default_sweep",
    "gen_am",
    "gen_multitone",
    "gen_pm",
    "gen_ramp",
    "gen_step",
    "generate_point",
    "noise_sigma",
    "pooled_residual",
    "reconstruct",
    "reference_mask",
    "residual",
    "response_time",
    "run_scenario",
    "tve",
    "tve_series",
    "window_residuals",
]

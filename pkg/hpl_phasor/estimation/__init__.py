from .estimator import PhasorStream, estimate_series, estimate_window, measure_frame_time, stream_estimate
from .io import SampleRecord, read_samples, write_phasor_csv, write_samples
from .models import PhasorEstimate, PhasorSeries, SampleWindow, wrap_phase

__all__ = [
    "PhasorEstimate",
    "PhasorSeries",
    "PhasorStream",
    "SampleRecord",
    "SampleWindow",
    "estimate_series",
    "estimate_window",
    "measure_frame_time",
    "read_samples",
    "stream_estimate",
    "wrap_phase",
    "write_phasor_csv",
    "write_samples",
]

"""Estimation service: bank + sample file in, phasor CSV out."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from .. import __version__
from ..config.settings import settings
from ..core.models import InputFormatError
from ..design.serialization import BANK_FORMAT_VERSION, load_bank
from ..estimation.estimator import measure_frame_time, stream_estimate
from ..estimation.io import read_samples, write_phasor_csv
from ..estimation.models import PhasorEstimate
from .manifest import RunManifest, Stopwatch, manifest_path_for, write_manifest

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimationOutcome:
    reports: List[List[PhasorEstimate]]
    csv_path: Path
    manifest: RunManifest
    manifest_path: Path


class EstimationService:
    """Online estimation of a recorded sample stream."""

    def __init__(self, timing_min_frames: Optional[int] = None):
        self.timing_min_frames = timing_min_frames or settings.timing_min_frames

    def estimate(
        self,
        bank_path: Union[str, Path],
        input_path: Union[str, Path],
        out_path: Union[str, Path],
    ) -> EstimationOutcome:
        """
        Estimate every report of a sample file.

        Args:
            bank_path: Serialized filter bank
            input_path: Sample file with an fs header
            out_path: Phasor CSV to write

        Returns:
            EstimationOutcome with the reports and written paths

        Raises:
            InputFormatError: If a file is malformed or fs differs from the bank
        """
        watch = Stopwatch()
        bank = load_bank(bank_path)
        record = read_samples(input_path)
        expected = bank.cfg.sampling_rate_hz
        if abs(record.sampling_rate_hz - expected) > 1e-9 * expected:
            raise InputFormatError(
                f"Sample file {input_path} is sampled at {record.sampling_rate_hz} Hz, bank expects {expected} Hz"
            )

        reports = stream_estimate(record.samples, record.start_time_s, bank)
        csv_path = write_phasor_csv(out_path, reports)
        mean_frame, timed = measure_frame_time(bank, record.samples, self.timing_min_frames)
        if timed:
            logger.debug(f"Mean frame time {mean_frame * 1e6:.1f} us over {timed} frames")

        warnings = []
        if not reports:
            warnings.append(f"input shorter than one {bank.window_length}-sample window")
        manifest = RunManifest(
            command="estimate",
            tool_version=__version__,
            config_paths={"bank": str(bank_path), "input": str(input_path)},
            outputs=[str(csv_path)],
            format_versions={"bank": BANK_FORMAT_VERSION},
            wall_clock_seconds=watch.elapsed,
            frames=len(reports),
            timed_frames=timed,
            mean_frame_seconds=mean_frame if timed else None,
            warnings=warnings,
        )
        manifest_path = write_manifest(manifest, manifest_path_for(out_path))
        return EstimationOutcome(reports=reports, csv_path=csv_path, manifest=manifest, manifest_path=manifest_path)

"""Bench service: scenario + two banks in, result CSVs out."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from .. import __version__
from ..bench.models import SCENARIO_FORMAT_VERSION, ScenarioResult, ScenarioSpec
from ..bench.runner import run_scenario
from ..design.serialization import BANK_FORMAT_VERSION, load_bank
from .documents import load_document
from .manifest import RunManifest, Stopwatch, write_manifest

logger = logging.getLogger(__name__)

POINTS_FILE = "points.csv"
SUMMARY_FILE = "summary.csv"
TRACE_FILE = "trace.csv"
MANIFEST_FILE = "manifest.json"

FLOAT_FORMAT = "%.10g"


@dataclass(frozen=True)
class BenchOutcome:
    result: ScenarioResult
    outputs: List[Path]
    manifest_path: Path


class BenchService:
    """Scenario sweeps of a bank against a baseline bank."""

    def run(
        self,
        scenario_path: Union[str, Path],
        bank_path: Union[str, Path],
        baseline_path: Union[str, Path],
        out_dir: Union[str, Path],
        seed: Optional[int] = None,
        trace: bool = False,
    ) -> BenchOutcome:
        """
        Run one scenario and write points, summary and (optionally) trace CSVs.

        Args:
            scenario_path: ScenarioSpec JSON
            bank_path: Bank under test
            baseline_path: Baseline bank
            out_dir: Output directory
            seed: Overrides the scenario's rng_seed
            trace: Write per-report TVE rows

        Returns:
            BenchOutcome with the result and written paths

        Raises:
            ConfigError: If the scenario is invalid or the banks disagree
        """
        watch = Stopwatch()
        spec = load_document(scenario_path, ScenarioSpec)
        if seed is not None:
            spec = spec.with_seed(seed)
        bank = load_bank(bank_path)
        baseline = load_bank(baseline_path)

        result = run_scenario(spec, bank, baseline, trace=trace or spec.trace)

        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs = [out_dir / POINTS_FILE, out_dir / SUMMARY_FILE]
        result.points_frame().to_csv(outputs[0], index=False, float_format=FLOAT_FORMAT)
        result.summary_frame().to_csv(outputs[1], index=False, float_format=FLOAT_FORMAT)
        if result.trace is not None:
            outputs.append(out_dir / TRACE_FILE)
            result.trace_frame().to_csv(outputs[-1], index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Scenario results written to {out_dir}")

        manifest = RunManifest(
            command="bench",
            tool_version=__version__,
            config_paths={
                "scenario": str(scenario_path),
                "bank": str(bank_path),
                "baseline": str(baseline_path),
            },
            seeds={"rng_seed": spec.rng_seed},
            outputs=[str(p) for p in outputs],
            format_versions={"scenario": SCENARIO_FORMAT_VERSION, "bank": BANK_FORMAT_VERSION},
            wall_clock_seconds=watch.elapsed,
            warnings=result.warnings,
        )
        manifest_path = write_manifest(manifest, out_dir / MANIFEST_FILE)
        return BenchOutcome(result=result, outputs=outputs, manifest_path=manifest_path)

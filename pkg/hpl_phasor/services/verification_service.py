"""Verification service: eigenstructure checks over a grid of window shapes."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ValidationError

from .. import __version__
from ..core.models import ConfigError, VerificationReport
from ..core.structure import verify_appendix_structure
from .documents import CONFIG_FORMAT_VERSION, VerifyConfig, load_document
from .manifest import RunManifest, Stopwatch, manifest_path_for, write_manifest

logger = logging.getLogger(__name__)


class VerificationDocument(BaseModel):
    """JSON written by ``hpl verify --out``."""

    passed: bool
    reports: List[VerificationReport]


@dataclass(frozen=True)
class VerificationOutcome:
    reports: List[VerificationReport]
    outputs: List[Path]

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)


def format_report(report: VerificationReport) -> str:
    status = "PASS" if report.passed else "FAIL: " + ", ".join(report.failures())
    lines = [
        f"c={report.window_cycles} K={report.taylor_order}  {status}",
        "  singular values: " + " ".join(f"{s:.6e}" for s in report.singular_values),
        "  d first row:     " + " ".join(f"{d:+.6e}" for d in report.d_first_row),
        f"  interlacing max rel. error: {max((c.relative_error for c in report.interlacing), default=0.0):.2e}",
        f"  first-row formula max error: {report.first_row_formula_max_error:.2e}",
    ]
    return "\n".join(lines)


class VerificationService:
    """Runs the right-singular-matrix structure checks."""

    def verify(self, config_path: Union[str, Path], out_path: Optional[Union[str, Path]] = None) -> VerificationOutcome:
        """
        Check every (c, K) shape of the verify config.

        Args:
            config_path: Verify config (model + grid)
            out_path: Optional JSON report; a manifest is written next to it

        Returns:
            VerificationOutcome; the caller decides how to report failures

        Raises:
            ConfigError: If the config or a grid shape is invalid
        """
        watch = Stopwatch()
        config = load_document(config_path, VerifyConfig)
        reports = []
        for shape in config.grid:
            try:
                cfg = config.model.with_window(shape.window_cycles, shape.taylor_order)
            except ValidationError as exc:
                raise ConfigError(f"Grid shape c={shape.window_cycles}, K={shape.taylor_order}: {exc}") from exc
            reports.append(verify_appendix_structure(cfg))

        outcome = VerificationOutcome(reports=reports, outputs=[])
        logger.info(f"Verified {len(reports)} shape(s): {'all passed' if outcome.passed else 'failures found'}")
        if out_path is None:
            return outcome

        out = Path(out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        document = VerificationDocument(passed=outcome.passed, reports=reports)
        out.write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")
        manifest = RunManifest(
            command="verify",
            tool_version=__version__,
            config_paths={"config": str(config_path)},
            outputs=[str(out)],
            format_versions={"config": CONFIG_FORMAT_VERSION},
            wall_clock_seconds=watch.elapsed,
            warnings=[
                f"c={r.window_cycles} K={r.taylor_order}: {', '.join(r.failures())}" for r in reports if not r.passed
            ],
        )
        write_manifest(manifest, manifest_path_for(out))
        return VerificationOutcome(reports=reports, outputs=[out])

"""Design service: config file in, bank file (and optional curves/baseline) out."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from .. import __version__
from ..core.models import ConfigError, ModelConfig
from ..design.bank import design_bank
from ..design.filters import tft_filter_bank
from ..design.models import DesignReport, FilterBank
from ..design.response import gain_curves
from ..design.serialization import BANK_FORMAT_VERSION, save_bank
from .documents import CONFIG_FORMAT_VERSION, DesignConfig, load_document
from .manifest import RunManifest, Stopwatch, manifest_path_for, write_manifest

logger = logging.getLogger(__name__)

# fewer cycles leave only y_{h,1} free
MIN_WINDOW_CYCLES = 3
MIN_TAYLOR_ORDER = 2


@dataclass(frozen=True)
class DesignOutcome:
    bank: FilterBank
    report: DesignReport
    outputs: List[Path]
    manifest_path: Path


class DesignService:
    """Offline design of an optimized bank from a design config."""

    @staticmethod
    def check_designable(cfg: ModelConfig) -> None:
        """Reject shapes with no multiplier left to optimize.

        Raises:
            ConfigError: If c < 3 or K < 2
        """
        if cfg.window_cycles < MIN_WINDOW_CYCLES or cfg.taylor_order < MIN_TAYLOR_ORDER:
            raise ConfigError(
                f"c={cfg.window_cycles}, K={cfg.taylor_order} leaves no multiplier to optimize; "
                f"use window_cycles >= {MIN_WINDOW_CYCLES} and taylor_order >= {MIN_TAYLOR_ORDER}"
            )

    def design(
        self,
        config_path: Union[str, Path],
        out_path: Union[str, Path],
        curves_path: Optional[Union[str, Path]] = None,
        baseline_path: Optional[Union[str, Path]] = None,
    ) -> DesignOutcome:
        """
        Design a bank and write it with its manifest.

        Args:
            config_path: Design config (model + design options)
            out_path: Bank file to write
            curves_path: Optional gain-curve CSV
            baseline_path: Optional file for the unoptimized TFT bank

        Returns:
            DesignOutcome with the bank, its report and the written paths

        Raises:
            ConfigError: If the config is invalid or not designable
        """
        watch = Stopwatch()
        config = load_document(config_path, DesignConfig)
        self.check_designable(config.model)

        bank = design_bank(config.model, config.design)
        assert bank.design_report is not None
        outputs = [save_bank(bank, out_path)]

        baseline = tft_filter_bank(config.model)
        if baseline_path is not None:
            outputs.append(save_bank(baseline, baseline_path))
        if curves_path is not None:
            curves = Path(curves_path)
            curves.parent.mkdir(parents=True, exist_ok=True)
            gain_curves(bank, baseline).to_csv(curves, index=False, float_format="%.10g")
            logger.info(f"Gain curves written to {curves}")
            outputs.append(curves)

        manifest = RunManifest(
            command="design",
            tool_version=__version__,
            config_paths={"config": str(config_path)},
            outputs=[str(p) for p in outputs],
            format_versions={"config": CONFIG_FORMAT_VERSION, "bank": BANK_FORMAT_VERSION},
            wall_clock_seconds=watch.elapsed,
            warnings=bank.design_report.warnings,
        )
        manifest_path = write_manifest(manifest, manifest_path_for(out_path))
        return DesignOutcome(bank=bank, report=bank.design_report, outputs=outputs, manifest_path=manifest_path)

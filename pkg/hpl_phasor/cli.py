import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .config.settings import settings
from .core.models import ConfigError, PhasorLabError
from .services import BenchService, DesignService, EstimationService, VerificationService, format_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_VERIFICATION = 4


def _design(args: argparse.Namespace) -> int:
    outcome = DesignService().design(args.config, args.out, curves_path=args.curves, baseline_path=args.baseline)
    print(outcome.report.to_table())
    return EXIT_OK


def _estimate(args: argparse.Namespace) -> int:
    outcome = EstimationService().estimate(args.bank, args.input, args.out)
    manifest = outcome.manifest
    if manifest.mean_frame_seconds is not None:
        print(f"{manifest.frames} reports; mean frame time {manifest.mean_frame_seconds * 1e3:.4f} ms")
    else:
        print(f"{manifest.frames} reports")
    return EXIT_OK


def _bench(args: argparse.Namespace) -> int:
    outcome = BenchService().run(args.config, args.bank, args.baseline, args.out, seed=args.seed, trace=args.trace)
    print(outcome.result.summary_frame().to_string(index=False, float_format=lambda v: f"{v:.4f}"))
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    outcome = VerificationService().verify(args.config, out_path=args.out)
    for report in outcome.reports:
        print(format_report(report))
    if not outcome.passed:
        logger.error("Verification failed")
        return EXIT_VERIFICATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hpl", description="SVD-optimized harmonic phasor filter banks")
    commands = parser.add_subparsers(dest="command", required=True)

    design = commands.add_parser("design", help="Design an optimized filter bank offline")
    design.add_argument("--config", required=True, help="Design config JSON")
    design.add_argument("--out", required=True, help="Bank file to write")
    design.add_argument("--curves", help="Also write plot-ready gain curves (CSV)")
    design.add_argument("--baseline", help="Also write the unoptimized TFT bank")
    design.set_defaults(handler=_design)

    estimate = commands.add_parser("estimate", help="Estimate harmonic phasors from a sample file")
    estimate.add_argument("--bank", required=True, help="Bank file")
    estimate.add_argument("--input", required=True, help="Sample file with an fs_hz header")
    estimate.add_argument("--out", required=True, help="Phasor CSV to write")
    estimate.set_defaults(handler=_estimate)

    bench = commands.add_parser("bench", help="Run a benchmark scenario against a baseline bank")
    bench.add_argument("--config", required=True, help="Scenario JSON")
    bench.add_argument("--bank", required=True, help="Bank under test")
    bench.add_argument("--baseline", required=True, help="Baseline bank (normally TFT)")
    bench.add_argument("--out", required=True, help="Output directory")
    bench.add_argument("--seed", type=int, help="Override the scenario seed")
    bench.add_argument("--trace", action="store_true", help="Write per-report TVE trace")
    bench.set_defaults(handler=_bench)

    verify = commands.add_parser("verify", help="Check the SVD eigenstructure over a grid of (c, K)")
    verify.add_argument("--config", required=True, help="Verify config JSON")
    verify.add_argument("--out", help="Write the verification report as JSON")
    verify.set_defaults(handler=_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the ``hpl`` command; returns the process exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return int(args.handler(args))
    except PhasorLabError as e:
        logger.error(f"{e.error_code or 'error'}: {e.message}")
        return e.exit_code
    except ValidationError as e:
        logger.error(f"config: {e}")
        return ConfigError(str(e)).exit_code
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())

"""
Service layer for the hpl command line.

Each service wraps the library calls of one command with file I/O and a run
manifest, and can be used directly from Python::

    from hpl_phasor.services import DesignService

    outcome = DesignService().design("design.json", "bank.json")
    print(outcome.report.to_table())
"""

from .bench_service import BenchOutcome, BenchService
from .design_service import DesignOutcome, DesignService
from .documents import DesignConfig, VerifyConfig, WindowShape, load_document
from .estimation_service import EstimationOutcome, EstimationService
from .manifest import RunManifest, manifest_path_for, write_manifest
from .verification_service import VerificationOutcome, VerificationService, format_report

__all__ = [
    "BenchOutcome",
    "BenchService",
    "DesignConfig",
    "DesignOutcome",
    "DesignService",
    "EstimationOutcome",
    "EstimationService",
    "RunManifest",
    "VerificationOutcome",
    "VerificationService",
    "VerifyConfig",
    "WindowShape",
    "format_report",
    "load_document",
    "manifest_path_for",
    "write_manifest",
]

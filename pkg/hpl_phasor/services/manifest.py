import logging
import time
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


class RunManifest(BaseModel):
    """Record of one CLI run: inputs, seeds, outputs and timing."""

    command: str
    tool_version: str
    config_paths: Dict[str, str] = Field(default_factory=dict)
    seeds: Dict[str, int] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)
    format_versions: Dict[str, int] = Field(default_factory=dict)
    wall_clock_seconds: float = Field(default=0.0, ge=0)
    frames: Optional[int] = Field(default=None, ge=0, description="Reports produced by the run")
    timed_frames: Optional[int] = Field(default=None, ge=0)
    mean_frame_seconds: Optional[float] = Field(default=None, ge=0, description="Mean wall-clock time per frame")
    warnings: List[str] = Field(default_factory=list)


def manifest_path_for(output: Union[str, Path]) -> Path:
    """``<out>.manifest.json`` next to an output file."""
    output = Path(output)
    return output.with_name(output.name + MANIFEST_SUFFIX)


def write_manifest(manifest: RunManifest, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"Manifest written to {path}")
    return path


class Stopwatch:
    """Wall-clock timer for manifests."""

    def __init__(self) -> None:
        self._began = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self._began

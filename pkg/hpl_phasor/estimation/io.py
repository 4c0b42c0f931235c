"""Sample files in, phasor CSV out.

Sample file layout::

    # fs_hz: 10000
    # start_time_s: 0.0
    0.123
    0.456
    ...
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np
import pandas as pd

from ..core.models import InputFormatError
from .models import PhasorEstimate

logger = logging.getLogger(__name__)

PHASOR_COLUMNS = ["t_tag", "h", "real", "imag", "amplitude", "phase_rad"]

_FS_KEYS = ("fs_hz", "fs", "sampling_rate_hz")
_START_KEYS = ("start_time_s", "start_time", "t0")


@dataclass(frozen=True)
class SampleRecord:
    samples: np.ndarray
    sampling_rate_hz: float
    start_time_s: float


def _parse_header(lines: List[str]) -> Dict[str, str]:
    header = {}
    for line in lines:
        body = line.lstrip("#").strip()
        for separator in (":", "="):
            if separator in body:
                key, value = body.split(separator, 1)
                header[key.strip().lower()] = value.strip()
                break
    return header


def _header_float(header: Dict[str, str], keys: Sequence[str], path: Path) -> Union[float, None]:
    for key in keys:
        if key in header:
            try:
                return float(header[key])
            except ValueError as exc:
                raise InputFormatError(f"{path}: header '{key}' is not a number: {header[key]!r}") from exc
    return None


def read_samples(path: Union[str, Path]) -> SampleRecord:
    """Read a sample file.

    Raises:
        InputFormatError: If the file is unreadable, lacks fs or holds a non-numeric line
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputFormatError(f"Cannot read sample file {path}: {exc}") from exc

    header = _parse_header([line for line in lines if line.lstrip().startswith("#")])
    body = [line for line in lines if line.strip() and not line.lstrip().startswith("#")]

    fs = _header_float(header, _FS_KEYS, path)
    if fs is None or fs <= 0:
        raise InputFormatError(f"{path}: missing or invalid sampling rate header (expected '# fs_hz: <value>')")
    start = _header_float(header, _START_KEYS, path) or 0.0

    if body:
        try:
            samples = np.loadtxt(body, dtype=float, ndmin=1)
        except ValueError as exc:
            raise InputFormatError(f"{path}: malformed sample line: {exc}") from exc
        if samples.ndim != 1:
            raise InputFormatError(f"{path}: expected one value per line")
    else:
        samples = np.empty(0)
    logger.debug(f"Read {samples.size} samples at {fs} Hz from {path}")
    return SampleRecord(samples=samples, sampling_rate_hz=fs, start_time_s=start)


def write_samples(
    path: Union[str, Path], samples: Sequence[float], sampling_rate_hz: float, start_time_s: float = 0.0
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"fs_hz: {sampling_rate_hz!r}\nstart_time_s: {start_time_s!r}"
    np.savetxt(path, np.asarray(samples, dtype=float), fmt="%.17g", header=header, comments="# ")
    return path


def phasor_frame(reports: Sequence[Sequence[PhasorEstimate]]) -> pd.DataFrame:
    rows = [
        (e.t_tag, e.order, e.phasor.real, e.phasor.imag, e.amplitude, e.phase)
        for report in reports
        for e in report
    ]
    return pd.DataFrame(rows, columns=PHASOR_COLUMNS)


def write_phasor_csv(path: Union[str, Path], reports: Sequence[Sequence[PhasorEstimate]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    phasor_frame(reports).to_csv(path, index=False, float_format="%.12g")
    logger.info(f"Phasor CSV written to {path} ({len(reports)} reports)")
    return path

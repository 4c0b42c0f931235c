"""
hpl-phasor - SVD-optimized dynamic harmonic phasor estimation.

The package designs FIR filter banks that extract the dynamic phasors of the
harmonics of a power-system waveform, and benchmarks them against the plain
Taylor-Fourier (TFT) bank.

Usage Examples:

Command line:
    hpl design   --config design.json --out bank.json --baseline tft.json
    hpl estimate --bank bank.json --input samples.txt --out phasors.csv
    hpl bench    --config scenario.json --bank bank.json --baseline tft.json --out results/
    hpl verify   --config verify.json

Library:
    from hpl_phasor.core.models import ModelConfig
    from hpl_phasor.design import design_bank
    from hpl_phasor.estimation import stream_estimate

    bank = design_bank(ModelConfig())
    reports = stream_estimate(samples, 0.0, bank)

Other entry points are available via their modules:
    - Signal generators and scenarios from hpl_phasor.bench
    - Command services from hpl_phasor.services
    - Runtime settings from hpl_phasor.config.settings
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("hpl-phasor")
except PackageNotFoundError:
    __version__ = "0.0.0+unknown"

from .core.models import (
    ConfigError,
    InputFormatError,
    ModelConfig,
    NumericalConditionError,
    PhasorLabError,
    VerificationError,
)

__all__ = [
    "__version__",
    "ConfigError",
    "InputFormatError",
    "ModelConfig",
    "NumericalConditionError",
    "PhasorLabError",
    "VerificationError",
]

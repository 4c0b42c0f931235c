import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class PhasorLabError(Exception):
    """Base exception for harmonic phasor design and estimation failures."""

    def __init__(self, message: str, exit_code: int = 1, error_code: Optional[str] = None):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code
        super().__init__(self.message)


class ConfigError(PhasorLabError):
    """Configuration cannot be designed, parsed or combined."""

    def __init__(self, message: str, error_code: str = "config"):
        super().__init__(message, exit_code=2, error_code=error_code)


class InputFormatError(ConfigError):
    """Sample, bank or config file is malformed or inconsistent."""

    def __init__(self, message: str):
        super().__init__(message, error_code="input_format")


class NumericalConditionError(PhasorLabError):
    """A system matrix is singular or too ill-conditioned to solve reliably."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=3, error_code="numerical_condition")


class VerificationError(PhasorLabError):
    """A numerical verification check failed."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=4, error_code="verification")


class ModelConfig(BaseModel):
    """Signal-model configuration shared by design, estimation and bench."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    nominal_frequency_hz: float = Field(
        default=50.0, gt=0, description="Nominal fundamental frequency f0, also the demodulation frequency"
    )
    sampling_rate_hz: float = Field(default=10000.0, gt=0, description="Sampling frequency fs")
    reporting_rate_hz: float = Field(default=50.0, gt=0, description="Reporting rate f_re in frames per second")
    max_harmonic: int = Field(default=13, ge=2, description="Highest harmonic order H")
    taylor_order: int = Field(default=2, ge=0, description="Taylor expansion order K")
    window_cycles: int = Field(default=3, ge=1, description="Window length c in nominal cycles")

    @model_validator(mode="after")
    def check_consistency(self) -> "ModelConfig":
        if self.window_cycles < self.taylor_order + 1:
            raise ValueError(
                f"window_cycles={self.window_cycles} must be at least taylor_order+1={self.taylor_order + 1}"
            )
        if self.sampling_rate_hz < 2 * self.max_harmonic * self.nominal_frequency_hz:
            raise ValueError(
                f"sampling_rate_hz={self.sampling_rate_hz} is below the Nyquist rate for "
                f"harmonic {self.max_harmonic} of {self.nominal_frequency_hz} Hz"
            )
        if not _is_integer_ratio(self.nominal_frequency_hz, self.reporting_rate_hz):
            raise ValueError(
                f"reporting_rate_hz={self.reporting_rate_hz} must divide nominal_frequency_hz evenly"
            )
        if not _is_integer_ratio(self.sampling_rate_hz, self.reporting_rate_hz):
            raise ValueError(
                f"reporting_rate_hz={self.reporting_rate_hz} must divide sampling_rate_hz evenly"
            )
        return self

    @property
    def sampling_period_s(self) -> float:
        return 1.0 / self.sampling_rate_hz

    @property
    def window_length(self) -> int:
        """Odd number of window samples N nearest to c*fs/f0 (ties go up)."""
        exact = self.window_cycles * self.sampling_rate_hz / self.nominal_frequency_hz
        return 2 * math.floor(exact / 2.0) + 1

    @property
    def half_window(self) -> int:
        return (self.window_length - 1) // 2

    @property
    def decimation(self) -> int:
        """Samples between consecutive reports."""
        return int(round(self.sampling_rate_hz / self.reporting_rate_hz))

    @property
    def n_terms(self) -> int:
        return self.taylor_order + 1

    def sample_offsets(self) -> np.ndarray:
        """Sample indices n from -N_h to N_h."""
        return np.arange(-self.half_window, self.half_window + 1)

    def with_window(self, window_cycles: int, taylor_order: int) -> "ModelConfig":
        """Copy with a different window length and Taylor order (validated)."""
        data = self.model_dump()
        data.update(window_cycles=window_cycles, taylor_order=taylor_order)
        return ModelConfig(**data)


def _is_integer_ratio(numerator: float, denominator: float) -> bool:
    ratio = numerator / denominator
    return abs(ratio - round(ratio)) < 1e-9 and round(ratio) >= 1


@dataclass(frozen=True)
class TaylorBasis:
    """Taylor basis B: row n holds (n*Ts)^k / k! for k = 0..K."""

    cfg: ModelConfig
    matrix: np.ndarray

    @property
    def n_samples(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_terms(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class ModulationMatrix:
    """Diagonal of E_h, stored as a length-N complex vector."""

    order: int
    diag: np.ndarray

    def conjugate(self) -> "ModulationMatrix":
        return ModulationMatrix(order=-self.order, diag=np.conj(self.diag))


@dataclass(frozen=True)
class SvdFactors:
    """B = C diag(Lambda) D^T with singular values in descending order."""

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    @property
    def first_row(self) -> np.ndarray:
        """First row of D, the d_{1,k} entries."""
        return self.right[0, :]

    @property
    def weights(self) -> np.ndarray:
        """Superposition weights d_{1,k} / lambda_k."""
        return self.first_row / self.singular_values


class InterlacingCheck(BaseModel):
    """One pairing of an even-indexed Gram eigenvalue with an odd-indexed minor eigenvalue."""

    index: int = Field(..., description="a in delta_2a(B^T B) = delta_2a-1(W11)")
    gram_eigenvalue: float
    minor_eigenvalue: float
    relative_error: float


class VerificationReport(BaseModel):
    """Numerical check of the eigenstructure of the right singular matrix."""

    window_cycles: int
    taylor_order: int
    singular_values: List[float]
    d_first_row: List[float]
    gram_eigenvalues: List[float]
    minor_eigenvalues: List[float]
    reconstruction_error: float = Field(..., description="Relative Frobenius error of C diag(Lambda) D^T")
    gram_parity_max: float = Field(..., description="Largest |B^T B| entry at odd i+j over the largest entry")
    eigen_identity_max_relative_error: float
    interlacing: List[InterlacingCheck]
    first_row_svd_squared: List[float]
    first_row_formula_squared: List[float]
    first_row_formula_max_error: float
    even_first_row_max: float
    odd_first_row_min: float
    reconstruction_ok: bool
    gram_parity_ok: bool
    eigen_identity_ok: bool
    interlacing_ok: bool
    first_row_formula_ok: bool
    first_row_parity_ok: bool

    @property
    def passed(self) -> bool:
        return all(
            (
                self.reconstruction_ok,
                self.gram_parity_ok,
                self.eigen_identity_ok,
                self.interlacing_ok,
                self.first_row_formula_ok,
                self.first_row_parity_ok,
            )
        )

    def failures(self) -> List[str]:
        checks = {
            "reconstruction": self.reconstruction_ok,
            "gram_parity": self.gram_parity_ok,
            "eigen_identity": self.eigen_identity_ok,
            "interlacing": self.interlacing_ok,
            "first_row_formula": self.first_row_formula_ok,
            "first_row_parity": self.first_row_parity_ok,
        }
        return [name for name, ok in checks.items() if not ok]

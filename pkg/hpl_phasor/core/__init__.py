from .models import (
    ConfigError,
    InputFormatError,
    ModelConfig,
    ModulationMatrix,
    NumericalConditionError,
    PhasorLabError,
    SvdFactors,
    TaylorBasis,
    VerificationError,
    VerificationReport,
)
from .structure import verify_appendix_structure
from .svd import jacobi_svd, svd_taylor_basis
from .taylor import build_modulation, build_taylor_basis

__all__ = [
    "ConfigError",
    "InputFormatError",
    "ModelConfig",
    "ModulationMatrix",
    "NumericalConditionError",
    "PhasorLabError",
    "SvdFactors",
    "TaylorBasis",
    "VerificationError",
    "VerificationReport",
    "build_modulation",
    "build_taylor_basis",
    "jacobi_svd",
    "svd_taylor_basis",
    "verify_appendix_structure",
]

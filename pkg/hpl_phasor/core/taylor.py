"""Taylor basis and harmonic modulation matrices of the signal model."""

import logging
import math

import numpy as np
from pydantic import ValidationError

from .models import ConfigError, ModelConfig, ModulationMatrix, TaylorBasis

logger = logging.getLogger(__name__)


def validate_config(cfg: ModelConfig) -> ModelConfig:
    """Re-run model validation, turning failures into ConfigError.

    Configs built with ``model_construct`` skip validation; every operation
    that derives matrices from a config goes through here first.
    """
    try:
        return ModelConfig.model_validate(cfg.model_dump())
    except ValidationError as exc:
        raise ConfigError(f"Invalid model config: {exc.errors()[0]['msg']}") from exc


def build_taylor_basis(cfg: ModelConfig) -> TaylorBasis:
    """Build B with entries (n*Ts)^k / k! for n = -N_h..N_h and k = 0..K.

    Args:
        cfg: Model configuration

    Returns:
        TaylorBasis of shape N x (K+1)

    Raises:
        ConfigError: If the configuration violates c >= K+1 or Nyquist
    """
    cfg = validate_config(cfg)
    t = cfg.sample_offsets() * cfg.sampling_period_s
    columns = [t**k / math.factorial(k) for k in range(cfg.n_terms)]
    # 0.0**0 evaluates to 1.0, so the centre row is [1, 0, ..., 0]
    matrix = np.column_stack(columns)
    matrix.setflags(write=False)
    logger.debug(f"Taylor basis built: {matrix.shape[0]} x {matrix.shape[1]}")
    return TaylorBasis(cfg=cfg, matrix=matrix)


def build_modulation(cfg: ModelConfig, h: int) -> ModulationMatrix:
    """Diagonal of E_h with entries exp(j*2*pi*h*f0*n*Ts).

    A negative order gives the conjugate matrix E_|h|*.

    Raises:
        ValueError: If |h| is zero or above the configured maximum harmonic
    """
    if h == 0 or abs(h) > cfg.max_harmonic:
        raise ValueError(f"Harmonic order {h} outside 1..{cfg.max_harmonic}")
    phase = 2.0 * np.pi * h * cfg.nominal_frequency_hz * cfg.sample_offsets() * cfg.sampling_period_s
    diag = np.exp(1j * phase)
    diag.setflags(write=False)
    return ModulationMatrix(order=h, diag=diag)

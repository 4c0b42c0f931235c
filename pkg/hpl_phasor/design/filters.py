"""Least-squares (TFT) filters and their SVD superposition form.

G = [E_1 B | ... | E_H B | E_1* B | ... | E_H* B] maps the Taylor coefficients
of every harmonic to the window samples. Row (h-1)(K+1) of G+ is the
zero-order phasor filter r_h. Writing B = C Lambda D^T gives

    G+_h = D Lambda^-1 l_h,    r_h = sum_k d_{1,k} / lambda_k * l_{k,:}

where l_h is the h block of F+ with F = [E_1 C | ... | E_H* C].
"""

import logging
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
from scipy.linalg import qr, solve, solve_triangular

from ..core.models import ModelConfig, NumericalConditionError, SvdFactors
from ..core.svd import svd_taylor_basis
from ..core.taylor import build_modulation, build_taylor_basis, validate_config
from .models import FilterBank, MultiplierSet

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12


def _modulations(cfg: ModelConfig) -> np.ndarray:
    """Rows E_1..E_H followed by E_1*..E_H*, shape (2H, N)."""
    orders = list(range(1, cfg.max_harmonic + 1))
    rows = [build_modulation(cfg, h).diag for h in orders]
    rows += [build_modulation(cfg, -h).diag for h in orders]
    return np.vstack(rows)


def system_matrix(cfg: ModelConfig) -> np.ndarray:
    """G with column blocks E_j B for j = 1..H, then E_j* B."""
    basis = build_taylor_basis(cfg).matrix
    return np.hstack([m[:, None] * basis for m in _modulations(cfg)])


@lru_cache(maxsize=16)
def _pseudo_inverse(cfg: ModelConfig) -> np.ndarray:
    g = system_matrix(cfg)
    # Column equilibration: raw Taylor columns differ by ~(T^K / K!) in scale
    scale = np.linalg.norm(g, axis=0)
    q, r = qr(g / scale, mode="economic")
    condition = float(np.linalg.cond(r)) ** 2
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise NumericalConditionError(
            f"Equilibrated G^H G condition number {condition:.3e} exceeds {CONDITION_LIMIT:g}"
        )
    logger.debug(f"Equilibrated G^H G condition number: {condition:.3e}")
    pinv = solve_triangular(r, q.conj().T) / scale[:, None]
    pinv.setflags(write=False)
    return pinv


def tft_pseudo_inverse(cfg: ModelConfig) -> np.ndarray:
    """G+ = (G^H G)^-1 G^H computed through a QR factorization.

    Raises:
        NumericalConditionError: If the equilibrated system is ill-conditioned
    """
    return _pseudo_inverse(validate_config(cfg))


def tft_derivative_filters(cfg: ModelConfig, h: int) -> np.ndarray:
    """All K+1 rows of G+_h: zero-order filter plus Taylor-derivative filters."""
    if not 1 <= h <= cfg.max_harmonic:
        raise ValueError(f"Harmonic order {h} outside 1..{cfg.max_harmonic}")
    start = (h - 1) * cfg.n_terms
    return tft_pseudo_inverse(cfg)[start:start + cfg.n_terms]


def tft_filter_bank(cfg: ModelConfig) -> FilterBank:
    """Unoptimized least-squares bank with filters for h = 1..H and unit multipliers."""
    cfg = validate_config(cfg)
    pinv = tft_pseudo_inverse(cfg)
    filters = {h: np.array(pinv[(h - 1) * cfg.n_terms]) for h in range(1, cfg.max_harmonic + 1)}
    logger.info(f"TFT bank built: {len(filters)} filters of length {cfg.window_length}")
    return FilterBank(
        cfg=cfg,
        filters=filters,
        multipliers=MultiplierSet.unit(filters, cfg.n_terms),
        kind="tft",
    )


@lru_cache(maxsize=16)
def _l_stack(cfg: ModelConfig) -> np.ndarray:
    factors = svd_taylor_basis(build_taylor_basis(cfg))
    f = np.hstack([m[:, None] * factors.left for m in _modulations(cfg)])
    f_h = f.conj().T
    gram = f_h @ f
    condition = float(np.linalg.cond(gram))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise NumericalConditionError(
            f"Gram matrix of modulated singular vectors has condition number {condition:.3e}"
        )
    stack = solve(gram, f_h, assume_a="her")
    stack = stack.reshape(2 * cfg.max_harmonic, cfg.n_terms, cfg.window_length)[: cfg.max_harmonic]
    stack.setflags(write=False)
    return stack


def compute_l_matrix(cfg: ModelConfig, h: int) -> np.ndarray:
    """l_h, the (K+1) x N block of (F^H F)^-1 F^H for harmonic h.

    Raises:
        ValueError: If h is out of range
        NumericalConditionError: If the Gram matrix cannot be inverted reliably
    """
    cfg = validate_config(cfg)
    if not 1 <= h <= cfg.max_harmonic:
        raise ValueError(f"Harmonic order {h} outside 1..{cfg.max_harmonic}")
    return _l_stack(cfg)[h - 1]


def taylor_factors(cfg: ModelConfig) -> SvdFactors:
    return svd_taylor_basis(build_taylor_basis(cfg))


def compose_filter(
    cfg: ModelConfig,
    h: int,
    l_h: np.ndarray,
    svd: SvdFactors,
    y: Union[MultiplierSet, Sequence[float]],
) -> np.ndarray:
    """Weighted row superposition sum_k d_{1,k} / (y_k lambda_k) * l_{k,:}.

    Raises:
        ValueError: If a multiplier is not positive or shapes disagree
    """
    multipliers = y.for_order(h, cfg.n_terms) if isinstance(y, MultiplierSet) else y
    ys = np.asarray(multipliers, dtype=float)
    if ys.shape != (cfg.n_terms,):
        raise ValueError(f"Expected {cfg.n_terms} multipliers, got {ys.shape}")
    if np.any(ys <= 0):
        raise ValueError(f"Multipliers must be positive, got {ys.tolist()}")
    if l_h.shape != (cfg.n_terms, cfg.window_length):
        raise ValueError(f"l matrix has shape {l_h.shape}, expected ({cfg.n_terms}, {cfg.window_length})")
    weights = svd.first_row / (ys * svd.singular_values)
    return weights @ l_h

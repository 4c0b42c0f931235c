"""Minimax search for the odd multipliers y_{h,3}, y_{h,5}, ...

The optimized filter is linear in 1/y_k, so its response on the gain grid is
precomputed per Taylor term and every candidate costs one small matrix
product. The search is a coarse logarithmic grid over all free multipliers,
coordinate refinement with step halving, and a scipy.optimize polish: SLSQP on
the epigraph form (minimize t subject to |H(f)| <= t on the grid) followed by
Nelder-Mead on the guarded objective.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from ..core.models import ConfigError, ModelConfig
from ..core.taylor import validate_config
from .filters import compose_filter, compute_l_matrix, taylor_factors, tft_derivative_filters
from .models import DesignOptions, DesignRow, MultiplierSet, TransitionBand
from .response import frequency_response, max_transition_gain, response_kernel

logger = logging.getLogger(__name__)

_CHUNK = 4096
_STRICT = 1e-12
_TINY = 1e-15


@dataclass(frozen=True)
class _OrderProblem:
    """Transition-band and passband responses split into fixed and free terms."""

    free: np.ndarray
    fixed_band: np.ndarray
    free_band: np.ndarray
    fixed_center: complex
    free_center: np.ndarray
    passband: Tuple[float, float]
    bounds: Tuple[float, float]

    def evaluate(self, multipliers: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Max band gain and passband-centre gain for a batch of free multipliers."""
        inverse = 1.0 / multipliers
        band = self.fixed_band[None, :] + inverse @ self.free_band
        center = np.abs(self.fixed_center + inverse @ self.free_center)
        return np.max(np.abs(band), axis=1), center

    def objective(self, multipliers: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Guarded objective (inf where the passband leaves its bounds) and raw gains."""
        gains, center = self.evaluate(multipliers)
        feasible = (center >= self.passband[0]) & (center <= self.passband[1])
        return np.where(feasible, gains, np.inf), gains

    def value(self, multipliers: np.ndarray) -> float:
        """Guarded objective of one point; inf outside the search box."""
        multipliers = np.asarray(multipliers, dtype=float)
        if np.any(multipliers < self.bounds[0]) or np.any(multipliers > self.bounds[1]):
            return float("inf")
        return float(self.objective(multipliers[None, :])[0][0])

    def band_response(self, multipliers: np.ndarray) -> np.ndarray:
        return self.fixed_band + (1.0 / multipliers) @ self.free_band

    def center_response(self, multipliers: np.ndarray) -> complex:
        return complex(self.fixed_center + (1.0 / multipliers) @ self.free_center)


def _build_problem(cfg: ModelConfig, h: int, options: DesignOptions) -> _OrderProblem:
    factors = taylor_factors(cfg)
    l_h = compute_l_matrix(cfg, h)
    band = TransitionBand.for_order(cfg, h)
    kernel = response_kernel(band.grid(options.grid_step_hz), cfg.window_length, cfg.sampling_rate_hz)
    center_kernel = response_kernel(
        np.array([h * cfg.nominal_frequency_hz]), cfg.window_length, cfg.sampling_rate_hz
    )[0]

    weighted = factors.weights[:, None] * l_h
    band_terms = weighted @ kernel.T
    center_terms = weighted @ center_kernel

    free = np.arange(2, cfg.n_terms, 2)
    fixed = np.setdiff1d(np.arange(cfg.n_terms), free)
    return _OrderProblem(
        free=free,
        fixed_band=band_terms[fixed].sum(axis=0),
        free_band=band_terms[free],
        fixed_center=complex(center_terms[fixed].sum()),
        free_center=center_terms[free],
        passband=(options.passband_min, options.passband_max),
        bounds=(options.search_min, options.search_max),
    )


def _coarse_grid(options: DesignOptions) -> np.ndarray:
    steps = int(np.floor(np.log(options.search_max / options.search_min) / np.log(options.search_ratio) + 1e-9))
    return options.search_min * options.search_ratio ** np.arange(steps + 1)


def _coarse_search(problem: _OrderProblem, options: DesignOptions) -> Tuple[np.ndarray, float, float]:
    """Best grid candidate, its guarded objective and the unguarded grid minimum."""
    axis = _coarse_grid(options)
    n_free = problem.free.size
    best_value = np.inf
    unguarded_min = np.inf
    kept: List[np.ndarray] = []
    kept_values: List[np.ndarray] = []

    candidates = itertools.product(axis, repeat=n_free)
    while True:
        chunk = np.array(list(itertools.islice(candidates, _CHUNK)), dtype=float)
        if chunk.size == 0:
            break
        guarded, raw = problem.objective(chunk)
        unguarded_min = min(unguarded_min, float(raw.min()))
        best_value = min(best_value, float(guarded.min()))
        if not np.isfinite(best_value):
            continue
        near = guarded <= best_value + options.tie_tolerance
        if near.any():
            kept.append(chunk[near])
            kept_values.append(guarded[near])

    if not np.isfinite(best_value):
        return np.ones(n_free), np.inf, unguarded_min
    # candidates stay in grid order, so ties resolve deterministically
    ties = np.concatenate(kept_values)
    near = ties <= best_value + options.tie_tolerance
    candidates_near, ties = np.vstack(kept)[near], ties[near]
    chosen = int(np.argmin(np.linalg.norm(candidates_near - 1.0, axis=1)))
    return candidates_near[chosen], float(ties[chosen]), unguarded_min


def _refine(problem: _OrderProblem, start: np.ndarray, options: DesignOptions) -> Tuple[np.ndarray, float]:
    current = np.array(start, dtype=float)
    current_value = problem.value(current)
    step = options.refine_initial_step
    while step >= options.refine_resolution * (1 - 1e-9):
        moved = True
        while moved:
            moved = False
            for i in range(current.size):
                for delta in (step, -step):
                    candidate = current.copy()
                    candidate[i] += delta
                    value = problem.value(candidate)
                    if value < current_value - _STRICT:
                        current, current_value, moved = candidate, value, True
                        break
        step /= 2.0
    return current, current_value


def _epigraph_slsqp(problem: _OrderProblem, start: np.ndarray, options: DesignOptions) -> np.ndarray:
    """min t over (y, t) subject to |H_y(f)| <= t on the grid and the passband guard."""
    n_free = start.size
    low, high = problem.passband

    def band_gradient(y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        response = problem.band_response(y)
        magnitude = np.maximum(np.abs(response), _TINY)
        # d/dy_k of 1/y_k is -1/y_k^2
        derivative = -(1.0 / y**2)[:, None] * problem.free_band
        return magnitude, np.real(np.conj(response)[None, :] * derivative) / magnitude

    def center_gradient(y: np.ndarray) -> Tuple[float, np.ndarray]:
        response = problem.center_response(y)
        magnitude = max(abs(response), _TINY)
        derivative = -(1.0 / y**2) * problem.free_center
        return magnitude, np.real(np.conj(response) * derivative) / magnitude

    def band_constraint(z: np.ndarray) -> np.ndarray:
        return z[-1] - band_gradient(z[:-1])[0]

    def band_jacobian(z: np.ndarray) -> np.ndarray:
        magnitude, gradient = band_gradient(z[:-1])
        return np.hstack([-gradient.T, np.ones((magnitude.size, 1))])

    def passband_constraint(z: np.ndarray) -> np.ndarray:
        magnitude = center_gradient(z[:-1])[0]
        return np.array([magnitude - low, high - magnitude])

    def passband_jacobian(z: np.ndarray) -> np.ndarray:
        row = np.append(center_gradient(z[:-1])[1], 0.0)
        return np.vstack([row, -row])

    unit_t = np.zeros(n_free + 1)
    unit_t[-1] = 1.0
    z0 = np.append(start, np.max(np.abs(problem.band_response(start))))
    result = optimize.minimize(
        lambda z: z[-1],
        z0,
        jac=lambda z: unit_t,
        method="SLSQP",
        bounds=[problem.bounds] * n_free + [(0.0, None)],
        constraints=[
            {"type": "ineq", "fun": band_constraint, "jac": band_jacobian},
            {"type": "ineq", "fun": passband_constraint, "jac": passband_jacobian},
        ],
        options={"maxiter": options.polish_max_iter, "ftol": 1e-14},
    )
    return np.clip(result.x[:-1], *problem.bounds)


def _nelder_mead(problem: _OrderProblem, start: np.ndarray, options: DesignOptions) -> np.ndarray:
    result = optimize.minimize(
        problem.value,
        start,
        method="Nelder-Mead",
        options={"maxiter": options.polish_max_iter, "xatol": 1e-6, "fatol": 1e-12},
    )
    return np.asarray(result.x, dtype=float)


def _polish(
    problem: _OrderProblem, start: np.ndarray, start_value: float, options: DesignOptions
) -> Tuple[np.ndarray, float]:
    """Run both scipy stages from the refined point; keep strict improvements only."""
    best, best_value = np.array(start, dtype=float), start_value
    for stage in (_epigraph_slsqp, _nelder_mead):
        candidate = stage(problem, best, options)
        value = problem.value(candidate)
        if value < best_value - _STRICT:
            logger.debug(f"{stage.__name__}: {best_value:.6g} -> {value:.6g}")
            best, best_value = candidate, value
    return best, best_value


def optimize_order(
    cfg: ModelConfig, h: int, options: Optional[DesignOptions] = None
) -> Tuple[Tuple[float, ...], np.ndarray, DesignRow]:
    """Optimize one harmonic and return (multipliers, filter, design row)."""
    options = options or DesignOptions()
    cfg = validate_config(cfg)
    if cfg.taylor_order < 2:
        raise ConfigError(f"taylor_order={cfg.taylor_order} leaves no free multiplier beyond y[h,1]")
    if not 2 <= h <= cfg.max_harmonic:
        raise ValueError(f"Harmonic order {h} outside 2..{cfg.max_harmonic}")

    band = TransitionBand.for_order(cfg, h)
    tft_gain = max_transition_gain(
        tft_derivative_filters(cfg, h)[0], band, options.grid_step_hz, cfg.sampling_rate_hz
    )

    problem = _build_problem(cfg, h, options)
    unit_value = float(problem.objective(np.ones((1, problem.free.size)))[0][0])
    start, coarse_value, unguarded_min = _coarse_search(problem, options)
    best, best_value = _refine(problem, start, options) if np.isfinite(coarse_value) else (start, coarse_value)
    if options.polish and np.isfinite(best_value):
        best, best_value = _polish(problem, best, best_value, options)
    guard_active = unguarded_min < min(best_value, coarse_value) - _STRICT

    ys = np.ones(cfg.n_terms)
    improved = best_value < unit_value - _STRICT
    warning = None
    if improved:
        ys[problem.free] = best
    else:
        warning = "optimizer did not improve on unit multipliers"
        logger.warning(f"h={h}: {warning}")
    if guard_active:
        logger.warning(f"h={h}: passband guard rejected lower-gain candidates")

    factors = taylor_factors(cfg)
    coefficients = compose_filter(cfg, h, compute_l_matrix(cfg, h), factors, ys)
    optimized_gain = max_transition_gain(coefficients, band, options.grid_step_hz, cfg.sampling_rate_hz)
    center = abs(frequency_response(coefficients, h * cfg.nominal_frequency_hz, cfg.sampling_rate_hz))

    row = DesignRow.from_gains(
        order=h,
        tft_max_gain=tft_gain,
        optimized_max_gain=optimized_gain,
        multipliers=ys,
        grid_step_hz=options.grid_step_hz,
        passband_gain=center,
        free_multipliers=int(problem.free.size),
        passband_guard_active=guard_active,
        improved=improved,
        warning=warning,
    )
    logger.debug(
        f"h={h}: y={ys.tolist()} tft={tft_gain:.4f} optimized={optimized_gain:.4f} "
        f"reduction={row.reduction_percent:.1f}%"
    )
    return tuple(float(y) for y in ys), coefficients, row


def optimize_multipliers(
    cfg: ModelConfig, h: int, options: Optional[DesignOptions] = None
) -> Tuple[MultiplierSet, DesignRow]:
    """Minimize the maximum transition-band gain of harmonic ``h``.

    y_{h,1} and every even multiplier stay at 1; the free variables are
    y_{h,3}, y_{h,5}, ... When no candidate beats unit multipliers the unit
    set is returned and the row carries a warning.

    Args:
        cfg: Model configuration with taylor_order >= 2
        h: Harmonic order in 2..H
        options: Search settings

    Returns:
        Tuple of (MultiplierSet for h, DesignRow)

    Raises:
        ConfigError: If the configuration has no free multipliers
    """
    ys, _, row = optimize_order(cfg, h, options)
    return MultiplierSet(values={h: list(ys)}), row

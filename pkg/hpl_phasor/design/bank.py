import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

import numpy as np

from ..config.settings import settings
from ..core.models import ModelConfig
from ..core.taylor import validate_config
from .filters import compute_l_matrix, tft_filter_bank
from .models import DesignOptions, DesignReport, DesignRow, FilterBank, MultiplierSet, TransitionBand
from .optimizer import optimize_order
from .response import frequency_response, max_transition_gain

logger = logging.getLogger(__name__)


def _unoptimized_rows(tft: FilterBank, orders: List[int], options: DesignOptions) -> List[DesignRow]:
    cfg = tft.cfg
    rows = []
    for h in orders:
        gain = max_transition_gain(
            tft.filters[h], TransitionBand.for_order(cfg, h), options.grid_step_hz, cfg.sampling_rate_hz
        )
        center = abs(frequency_response(tft.filters[h], h * cfg.nominal_frequency_hz, cfg.sampling_rate_hz))
        rows.append(
            DesignRow.from_gains(
                order=h,
                tft_max_gain=gain,
                optimized_max_gain=gain,
                multipliers=[1.0] * cfg.n_terms,
                grid_step_hz=options.grid_step_hz,
                passband_gain=center,
                free_multipliers=0,
                improved=False,
                warning="no free multipliers",
            )
        )
    return rows


def design_bank(cfg: ModelConfig, options: Optional[DesignOptions] = None) -> FilterBank:
    """Design the optimized bank: TFT filters, SVD, per-harmonic multiplier search.

    The fundamental keeps its TFT filter and is left out of the report.
    Orders are optimized in parallel, capped by ``settings.threads``.

    Args:
        cfg: Model configuration
        options: Search settings; ``options.orders`` limits the optimized harmonics

    Returns:
        FilterBank with the design report attached
    """
    options = options or DesignOptions()
    cfg = validate_config(cfg)
    tft = tft_filter_bank(cfg)
    orders = sorted(options.orders) if options.orders else list(range(2, cfg.max_harmonic + 1))
    for h in orders:
        if not 2 <= h <= cfg.max_harmonic:
            raise ValueError(f"Harmonic order {h} outside 2..{cfg.max_harmonic}")

    if cfg.taylor_order < 2:
        logger.warning(f"taylor_order={cfg.taylor_order}: no free multipliers, bank stays TFT")
        report = DesignReport(grid_step_hz=options.grid_step_hz, rows=_unoptimized_rows(tft, orders, options))
        return FilterBank(
            cfg=cfg, filters=dict(tft.filters), multipliers=tft.multipliers, design_report=report, kind="tft"
        )

    # warm the shared caches before fanning out
    compute_l_matrix(cfg, 1)

    workers = max(1, min(settings.threads, len(orders)))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(lambda h: optimize_order(cfg, h, options), orders))

    filters: Dict[int, np.ndarray] = dict(tft.filters)
    values = {h: [1.0] * cfg.n_terms for h in tft.filters}
    rows = []
    for h, (ys, coefficients, row) in zip(orders, results):
        filters[h] = coefficients
        values[h] = list(ys)
        rows.append(row)

    report = DesignReport(grid_step_hz=options.grid_step_hz, rows=rows)
    for warning in report.warnings:
        logger.warning(warning)
    logger.info(
        f"Bank designed for c={cfg.window_cycles}, K={cfg.taylor_order}: "
        f"minimum reduction {min(r.reduction_percent for r in rows):.1f}% over orders {orders[0]}..{orders[-1]}"
    )
    return FilterBank(
        cfg=cfg,
        filters=filters,
        multipliers=MultiplierSet(values=values),
        design_report=report,
        kind="svd-optimized",
    )

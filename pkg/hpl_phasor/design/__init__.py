from .bank import design_bank
from .filters import (
    compose_filter,
    compute_l_matrix,
    system_matrix,
    tft_derivative_filters,
    tft_filter_bank,
    tft_pseudo_inverse,
)
from .models import DesignOptions, DesignReport, DesignRow, FilterBank, MultiplierSet, TransitionBand
from .optimizer import optimize_multipliers
from .response import frequency_response, gain_curves, max_transition_gain
from .serialization import BankDocument, bank_from_json, bank_to_json, load_bank, save_bank

__all__ = [
    "BankDocument",
    "DesignOptions",
    "DesignReport",
    "DesignRow",
    "FilterBank",
    "MultiplierSet",
    "TransitionBand",
    "bank_from_json",
    "bank_to_json",
    "compose_filter",
    "compute_l_matrix",
    "design_bank",
    "frequency_response",
    "gain_curves",
    "load_bank",
    "max_transition_gain",
    "optimize_multipliers",
    "save_bank",
    "system_matrix",
    "tft_derivative_filters",
    "tft_filter_bank",
    "tft_pseudo_inverse",
]

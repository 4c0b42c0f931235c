"""Versioned JSON document for filter banks.

Coefficients are written as [real, imag] pairs; pydantic emits the shortest
repr of each float, which round-trips exactly.
"""

import logging
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from ..core.models import InputFormatError, ModelConfig
from .models import DesignReport, FilterBank, MultiplierSet

logger = logging.getLogger(__name__)

BANK_FORMAT_VERSION = 1


class FilterEntry(BaseModel):
    order: int = Field(..., ge=1)
    coefficients: List[Tuple[float, float]]


class BankDocument(BaseModel):
    """On-disk form of a FilterBank."""

    format_version: Literal[1] = BANK_FORMAT_VERSION
    kind: str
    model: ModelConfig
    filters: List[FilterEntry]
    multipliers: MultiplierSet
    design_report: Optional[DesignReport] = None

    @classmethod
    def from_bank(cls, bank: FilterBank) -> "BankDocument":
        entries = [
            FilterEntry(
                order=h,
                coefficients=[(float(c.real), float(c.imag)) for c in bank.filters[h]],
            )
            for h in bank.orders
        ]
        return cls(
            kind=bank.kind,
            model=bank.cfg,
            filters=entries,
            multipliers=bank.multipliers,
            design_report=bank.design_report,
        )

    def to_bank(self) -> FilterBank:
        filters = {}
        for entry in self.filters:
            pairs = np.asarray(entry.coefficients, dtype=float).reshape(-1, 2)
            filters[entry.order] = pairs[:, 0] + 1j * pairs[:, 1]
        try:
            return FilterBank(
                cfg=self.model,
                filters=filters,
                multipliers=self.multipliers,
                design_report=self.design_report,
                kind=self.kind,
            )
        except ValueError as exc:
            raise InputFormatError(f"Inconsistent bank document: {exc}") from exc


def bank_to_json(bank: FilterBank) -> str:
    return BankDocument.from_bank(bank).model_dump_json(indent=2)


def bank_from_json(text: str) -> FilterBank:
    """Parse a bank document.

    Raises:
        InputFormatError: If the document is malformed or has the wrong version
    """
    try:
        document = BankDocument.model_validate_json(text)
    except ValidationError as exc:
        raise InputFormatError(f"Invalid bank document: {exc}") from exc
    return document.to_bank()


def save_bank(bank: FilterBank, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(bank_to_json(bank) + "\n", encoding="utf-8")
    logger.info(f"Bank written to {path}")
    return path


def load_bank(path: Union[str, Path]) -> FilterBank:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"Cannot read bank file {path}: {exc}") from exc
    return bank_from_json(text)

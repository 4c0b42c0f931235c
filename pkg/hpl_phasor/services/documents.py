"""JSON run-configuration documents for the design, bench and verify commands."""

import json
import logging
from pathlib import Path
from typing import List, Literal, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.models import ConfigError, InputFormatError, ModelConfig
from ..design.models import DesignOptions

logger = logging.getLogger(__name__)

CONFIG_FORMAT_VERSION = 1

DocumentT = TypeVar("DocumentT", bound=BaseModel)


class DesignConfig(BaseModel):
    """Input of ``hpl design``."""

    model_config = ConfigDict(extra="forbid")

    format_version: Literal[1] = CONFIG_FORMAT_VERSION
    model: ModelConfig = Field(default_factory=ModelConfig)
    design: DesignOptions = Field(default_factory=DesignOptions)


class WindowShape(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    window_cycles: int = Field(..., ge=1)
    taylor_order: int = Field(..., ge=0)

    @model_validator(mode="after")
    def check_shape(self) -> "WindowShape":
        if self.window_cycles < self.taylor_order + 1:
            raise ValueError(f"window_cycles={self.window_cycles} is below taylor_order+1")
        return self


def default_verify_grid() -> List[WindowShape]:
    return [WindowShape(window_cycles=k + 1, taylor_order=k) for k in range(2, 7)]


class VerifyConfig(BaseModel):
    """Input of ``hpl verify``; ``grid`` lists the (c, K) shapes to check."""

    model_config = ConfigDict(extra="forbid")

    format_version: Literal[1] = CONFIG_FORMAT_VERSION
    model: ModelConfig = Field(default_factory=ModelConfig)
    grid: List[WindowShape] = Field(default_factory=default_verify_grid)


def load_document(path: Union[str, Path], document_type: Type[DocumentT]) -> DocumentT:
    """Read and validate a JSON document.

    Raises:
        InputFormatError: If the file cannot be read or is not JSON
        ConfigError: If the content fails validation
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputFormatError(f"Cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path} is not valid JSON: {exc}") from exc
    try:
        document = document_type.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(f"Invalid {document_type.__name__} in {path}: {exc}") from exc
    logger.debug(f"Loaded {document_type.__name__} from {path}")
    return document

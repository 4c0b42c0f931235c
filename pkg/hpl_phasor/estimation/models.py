import math
from dataclasses import dataclass
from typing import List

import numpy as np


def wrap_phase(phase: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.remainder(phase, 2.0 * math.pi)
    return math.pi if wrapped <= -math.pi else wrapped


@dataclass(frozen=True)
class SampleWindow:
    """N samples centred on ``t_tag``."""

    samples: np.ndarray
    t_tag: float


@dataclass(frozen=True)
class PhasorEstimate:
    """Dynamic phasor of one harmonic at one report instant (p.u.)."""

    order: int
    t_tag: float
    phasor: complex

    @property
    def amplitude(self) -> float:
        return abs(self.phasor)

    @property
    def phase(self) -> float:
        return wrap_phase(math.atan2(self.phasor.imag, self.phasor.real))


@dataclass(frozen=True)
class PhasorSeries:
    """Reports as arrays: ``phasors[i, j]`` is order ``orders[j]`` at ``tags[i]``."""

    tags: np.ndarray
    orders: List[int]
    phasors: np.ndarray

    def __len__(self) -> int:
        return int(self.tags.size)

    def column(self, h: int) -> np.ndarray:
        return self.phasors[:, self.orders.index(h)]

    def reports(self) -> List[List[PhasorEstimate]]:
        return [
            [PhasorEstimate(order=h, t_tag=float(t), phasor=complex(p)) for h, p in zip(self.orders, row)]
            for t, row in zip(self.tags, self.phasors)
        ]

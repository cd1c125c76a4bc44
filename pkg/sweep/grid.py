# sweep/grid.py
# Grid (q, gamma) dan hasil peta region per cell.

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from core.errors import DomainError
from race.strategies import STRATEGY_ORDER, StrategyKind

# q di-clamp supaya tetap memenuhi 0 < q < 1/2 di MiningParams
Q_EPSILON = 1e-6


@dataclass(frozen=True)
class GridSpec:
    """
    Grid reguler. steps = 1 berarti sumbu hanya berisi nilai min-nya.
    Urutan cell: row-major, gamma di luar, q di dalam.
    """

    q_min: float = Q_EPSILON
    q_max: float = 0.5 - Q_EPSILON
    gamma_min: float = 0.0
    gamma_max: float = 1.0
    q_steps: int = 101
    gamma_steps: int = 101

    def __post_init__(self) -> None:
        if self.q_steps < 1 or self.gamma_steps < 1:
            raise DomainError(
                f"GridSpec: steps harus >= 1, dapat q_steps={self.q_steps}, gamma_steps={self.gamma_steps}"
            )
        if not (0.0 <= self.q_min <= self.q_max < 0.5):
            raise DomainError(
                f"GridSpec: butuh 0 <= q_min <= q_max < 0.5, dapat [{self.q_min}, {self.q_max}]"
            )
        if not (0.0 <= self.gamma_min <= self.gamma_max <= 1.0):
            raise DomainError(
                f"GridSpec: butuh 0 <= gamma_min <= gamma_max <= 1, "
                f"dapat [{self.gamma_min}, {self.gamma_max}]"
            )

    @property
    def size(self) -> int:
        return self.q_steps * self.gamma_steps

    def q_values(self) -> np.ndarray:
        if self.q_steps == 1:
            values = np.array([self.q_min])
        else:
            values = np.linspace(self.q_min, self.q_max, self.q_steps)
        return np.clip(values, Q_EPSILON, 0.5 - Q_EPSILON)

    def gamma_values(self) -> np.ndarray:
        if self.gamma_steps == 1:
            return np.array([self.gamma_min])
        return np.linspace(self.gamma_min, self.gamma_max, self.gamma_steps)

    def cells(self) -> List[Tuple[int, float, float]]:
        """(cell_index, q, gamma) row-major, gamma di luar."""
        qs = self.q_values()
        gammas = self.gamma_values()
        out = []
        for gi, gamma in enumerate(gammas):
            for qi, q in enumerate(qs):
                out.append((gi * self.q_steps + qi, float(q), float(gamma)))
        return out


@dataclass(frozen=True)
class CellResult:
    q: float
    gamma: float
    best: StrategyKind
    scores: Dict[StrategyKind, float]
    # standard error skor SM (0 kalau SM tidak disimulasikan)
    sm_std_error: float = 0.0


@dataclass
class RegionMap:
    grid: GridSpec
    cells: List[CellResult] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.cells) != self.grid.size:
            raise DomainError(
                f"RegionMap: butuh {self.grid.size} cell, dapat {len(self.cells)}"
            )

    def cell(self, gamma_index: int, q_index: int) -> CellResult:
        return self.cells[gamma_index * self.grid.q_steps + q_index]

    def best_matrix(self) -> List[List[StrategyKind]]:
        """Baris = gamma (naik), kolom = q (naik)."""
        n = self.grid.q_steps
        return [
            [c.best for c in self.cells[row * n:(row + 1) * n]]
            for row in range(self.grid.gamma_steps)
        ]

    def region_counts(self) -> Dict[StrategyKind, int]:
        counts = Counter(c.best for c in self.cells)
        return {kind: counts.get(kind, 0) for kind in STRATEGY_ORDER}

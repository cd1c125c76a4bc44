# sweep/classifier.py
# Klasifikasi strategi terbaik per cell (apparent hashrate) & pembuatan peta (q, gamma).

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from core.errors import DomainError
from mining.closed_form import revenue_ratio_efsm, revenue_ratio_lsm
from mining.mining_params import MiningParams
from race.monte_carlo import SimulatedMetrics, run_monte_carlo
from race.parallel import deterministic_map
from race.rng import derive_seed
from race.strategies import STRATEGY_ORDER, StrategyKind
from sweep.grid import CellResult, GridSpec, RegionMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmMode:
    """
    simulate=True  → skor SM dari Monte Carlo (n_cycles per cell, seed per cell
                     diturunkan dari (seed, cell_index))
    simulate=False → SM diberi skor 0 (peta tiga strategi)
    """

    simulate: bool
    n_cycles: int = 0
    seed: int = 0

    @classmethod
    def skip(cls) -> "SmMode":
        return cls(simulate=False)

    @classmethod
    def simulated(cls, n_cycles: int, seed: int) -> "SmMode":
        return cls(simulate=True, n_cycles=n_cycles, seed=seed)

    @property
    def label(self) -> str:
        if not self.simulate:
            return "skip"
        return f"simulate(n_cycles={self.n_cycles}, seed={self.seed})"


def _clamp_score(x: float) -> float:
    # pembulatan floating-point bisa keluar sedikit dari [0, 1]
    return min(max(float(x), 0.0), 1.0)


def pick_best(scores: Dict[StrategyKind, float]) -> StrategyKind:
    # seri → strategi yang paling tidak deviant (HM > SM > LSM > EFSM)
    best = STRATEGY_ORDER[0]
    for kind in STRATEGY_ORDER[1:]:
        if scores[kind] > scores[best]:
            best = kind
    return best


def classify_cell(
    params: MiningParams,
    sm_score: float | SimulatedMetrics = 0.0,
) -> Tuple[StrategyKind, Dict[StrategyKind, float]]:
    """
    Skor = apparent hashrate:
      HM  : q
      SM  : q^ dari simulasi (atau nilai cache)
      LSM : q~_LSM closed form, limit mode di gamma = 0
      EFSM: q~_EFSM closed form, limit mode di gamma = 0
    """
    params.require_attacker("classify_cell")
    if isinstance(sm_score, SimulatedMetrics):
        if sm_score.kind is not StrategyKind.SELFISH:
            raise DomainError(f"classify_cell: butuh metrics SM, dapat {sm_score.kind.label}")
        sm_value = sm_score.apparent_hashrate.mean
    else:
        sm_value = float(sm_score)

    scores = {
        StrategyKind.HONEST: _clamp_score(params.q),
        StrategyKind.SELFISH: _clamp_score(sm_value),
        StrategyKind.LEAD_STUBBORN: _clamp_score(
            revenue_ratio_lsm(params, limit_mode=True).apparent_hashrate
        ),
        StrategyKind.EQUAL_FORK_STUBBORN: _clamp_score(
            revenue_ratio_efsm(params, limit_mode=True).apparent_hashrate
        ),
    }
    return pick_best(scores), scores


def _cell_task(task: Tuple[int, float, float, SmMode]) -> CellResult:
    cell_index, q, gamma, sm_mode = task
    params = MiningParams(q=q, gamma=gamma)

    sm_score = 0.0
    sm_error = 0.0
    if sm_mode.simulate:
        metrics = run_monte_carlo(
            StrategyKind.SELFISH,
            params,
            sm_mode.n_cycles,
            derive_seed(sm_mode.seed, cell_index),
            workers=1,
        )
        sm_score = metrics.apparent_hashrate.mean
        sm_error = metrics.apparent_hashrate.std_error

    best, scores = classify_cell(params, sm_score)
    return CellResult(q=q, gamma=gamma, best=best, scores=scores, sm_std_error=sm_error)


def frontier_violations(region_map: RegionMap) -> List[Tuple[int, int]]:
    """
    Cell (gamma_index, q_index) di mana HM kembali menang setelah strategi
    deviant sudah menang di q yang lebih kecil pada baris yang sama.
    """
    violations = []
    for gi, row in enumerate(region_map.best_matrix()):
        deviant_seen = False
        for qi, best in enumerate(row):
            if best is not StrategyKind.HONEST:
                deviant_seen = True
            elif deviant_seen:
                violations.append((gi, qi))
    return violations


def _resolved(cell: CellResult, winner: StrategyKind, other: StrategyKind, sigmas: float) -> bool:
    # selisih yang melibatkan skor SM simulasi harus melewati noise-nya
    margin = cell.scores[winner] - cell.scores[other]
    if StrategyKind.SELFISH in (winner, other):
        return margin > sigmas * cell.sm_std_error
    return margin > 0.0


def ordering_reversals(
    region_map: RegionMap,
    gamma_index: int,
    sigmas: float = 4.0,
) -> List[Tuple[int, int]]:
    """
    Pasangan kolom (i, j), i < j, di satu baris gamma di mana urutan
    HM → SM → LSM → EFSM mundur (pemenang j lebih awal dari pemenang i).
    Dihitung hanya kalau kedua keputusan terpisah dari noise SM
    (lebih dari sigmas standard error); di peta analitik semua mundur dihitung.
    """
    row = [region_map.cell(gamma_index, qi) for qi in range(region_map.grid.q_steps)]
    rank = {kind: i for i, kind in enumerate(STRATEGY_ORDER)}
    reversals = []
    for i, early in enumerate(row):
        for j in range(i + 1, len(row)):
            late = row[j]
            if rank[late.best] >= rank[early.best]:
                continue
            if (
                _resolved(early, early.best, late.best, sigmas)
                and _resolved(late, late.best, early.best, sigmas)
            ):
                reversals.append((i, j))
    return reversals


def compute_map(grid: GridSpec, sm_mode: SmMode, workers: int | None = None) -> RegionMap:
    if sm_mode.simulate and sm_mode.n_cycles < 1:
        raise DomainError(f"compute_map: n_cycles SM harus > 0, dapat {sm_mode.n_cycles}")

    tasks = [(index, q, gamma, sm_mode) for index, q, gamma in grid.cells()]
    logger.info(
        "compute_map: %dx%d cell (q x gamma), SM %s",
        grid.q_steps, grid.gamma_steps, sm_mode.label,
    )
    # tanpa simulasi SM tiap cell hanya closed form, tidak perlu worker pool
    cells = deterministic_map(_cell_task, tasks, workers if sm_mode.simulate else 1)
    region_map = RegionMap(grid=grid, cells=cells)

    violations = frontier_violations(region_map)
    if violations:
        logger.warning(
            "frontier tidak monoton di %d cell (HM menang lagi setelah strategi deviant), contoh %s",
            len(violations), violations[:5],
        )

    counts = region_map.region_counts()
    logger.info(
        "compute_map selesai: %s",
        ", ".join(f"{kind.label}={counts[kind]}" for kind in STRATEGY_ORDER),
    )
    return region_map

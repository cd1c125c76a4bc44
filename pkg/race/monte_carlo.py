# race/monte_carlo.py
# Agregasi Monte Carlo: estimasi E[tau], E[R], E[official], Gamma^, delta^, q^,
# pmf empiris N'(tau), dan simulasi Poisson game.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from core.errors import DomainError
from core.lab_state import state
from mining.mining_params import MiningParams
from mining.race_expectations import poisson_game_expectations
from race.cycle_engine import CycleBatch, race_until, simulate_batch
from race.parallel import deterministic_map, tree_reduce
from race.race_settings import race_settings
from race.rng import RandomStream
from race.strategies import StrategyKind

logger = logging.getLogger(__name__)

# indeks vektor jumlah per batch
_N = 0
_S_TAU, _SS_TAU = 1, 2
_S_REV, _SS_REV = 3, 4
_S_OFF, _SS_OFF = 5, 6
_S_NP, _SS_NP = 7, 8
_S_REV_TAU, _S_REV_OFF, _S_TAU_OFF = 9, 10, 11
_N_FIELDS = 12


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    n_samples: int

    @classmethod
    def from_sums(cls, s: float, ss: float, n: int, scale: float = 1.0) -> "MonteCarloEstimate":
        """std_error = std sampel / sqrt(n)."""
        if n < 2:
            raise DomainError(f"MonteCarloEstimate: butuh n_samples >= 2, dapat {n}")
        m = s / n
        var = max((ss - n * m * m) / (n - 1), 0.0)
        return cls(mean=m * scale, std_error=math.sqrt(var / n) * abs(scale), n_samples=n)

    def z_score(self, expected: float) -> float:
        diff = self.mean - expected
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.std_error


def _ratio_estimate(
    sx: float, sxx: float, sy: float, syy: float, sxy: float, n: int, scale: float = 1.0
) -> MonteCarloEstimate:
    """
    Rasio mean (x_bar / y_bar), standard error lewat delta method.
    """
    x_bar = sx / n
    y_bar = sy / n
    r = x_bar / y_bar
    var_x = max((sxx - n * x_bar * x_bar) / (n - 1), 0.0)
    var_y = max((syy - n * y_bar * y_bar) / (n - 1), 0.0)
    cov = (sxy - n * x_bar * y_bar) / (n - 1)
    var_r = max((var_x - 2.0 * r * cov + r * r * var_y) / (n * y_bar * y_bar), 0.0)
    return MonteCarloEstimate(mean=r * scale, std_error=math.sqrt(var_r) * abs(scale), n_samples=n)


@dataclass(frozen=True)
class SimulatedMetrics:
    """
    Estimasi per kuantitas + turunan rasio-of-means:
      revenue_ratio     = mean(R) / mean(tau)
      delta             = mean(tau) / (tau0 * mean(official))
      apparent_hashrate = revenue_ratio * delta * tau0 / b
    """

    kind: StrategyKind
    params: MiningParams
    seed: int
    duration: MonteCarloEstimate
    revenue: MonteCarloEstimate
    official_blocks: MonteCarloEstimate
    n_prime: MonteCarloEstimate
    revenue_ratio: MonteCarloEstimate
    delta: MonteCarloEstimate
    apparent_hashrate: MonteCarloEstimate
    max_events: int

    @property
    def n_cycles(self) -> int:
        return self.duration.n_samples


def _batch_layout(n_items: int) -> List[Tuple[int, int]]:
    size = race_settings.batch_cycles
    layout = []
    index = 0
    start = 0
    while start < n_items:
        layout.append((index, min(size, n_items - start)))
        start += size
        index += 1
    return layout


def _batch_sums(batch: CycleBatch) -> np.ndarray:
    tau = batch.duration
    rev = batch.revenue_blocks.astype(float)
    off = batch.official_blocks.astype(float)
    n_prime = batch.n_prime_at_tau.astype(float)

    sums = np.zeros(_N_FIELDS, dtype=float)
    sums[_N] = batch.size
    sums[_S_TAU] = np.sum(tau)
    sums[_SS_TAU] = np.sum(tau * tau)
    sums[_S_REV] = np.sum(rev)
    sums[_SS_REV] = np.sum(rev * rev)
    sums[_S_OFF] = np.sum(off)
    sums[_SS_OFF] = np.sum(off * off)
    sums[_S_NP] = np.sum(n_prime)
    sums[_SS_NP] = np.sum(n_prime * n_prime)
    sums[_S_REV_TAU] = np.sum(rev * tau)
    sums[_S_REV_OFF] = np.sum(rev * off)
    sums[_S_TAU_OFF] = np.sum(tau * off)
    return sums


def _cycle_batch_task(task: Tuple[StrategyKind, MiningParams, int, int, int]) -> Tuple[np.ndarray, int]:
    kind, params, seed, batch_index, size = task
    stream = RandomStream.from_seed(seed, batch_index)
    batch = simulate_batch(kind, params, size, stream)
    sums = _batch_sums(batch)
    if state.debug:
        logger.debug(
            "[%s] batch %d: %d cycle, mean tau=%.4f, max event=%d",
            kind.label, batch_index, size, sums[_S_TAU] / size, int(batch.events.max()),
        )
    return sums, int(batch.events.max())


def _combine(a: Tuple[np.ndarray, int], b: Tuple[np.ndarray, int]) -> Tuple[np.ndarray, int]:
    return a[0] + b[0], max(a[1], b[1])


def run_monte_carlo(
    kind: StrategyKind,
    params: MiningParams,
    n_cycles: int,
    seed: int,
    workers: int | None = None,
) -> SimulatedMetrics:
    """
    Agregasi n_cycles cycle independen.
    Deterministik untuk (kind, params, n_cycles, seed), apa pun jumlah worker:
    stream per batch dari (seed, batch_index), reduksi pohon dengan bentuk tetap.
    """
    if n_cycles < race_settings.min_cycles:
        raise DomainError(
            f"run_monte_carlo: n_cycles minimal {race_settings.min_cycles}, dapat {n_cycles}"
        )
    if kind is not StrategyKind.HONEST:
        params.require_attacker(f"run_monte_carlo({kind.label})")

    tasks = [(kind, params, seed, index, size) for index, size in _batch_layout(n_cycles)]
    logger.info(
        "Monte Carlo %s: q=%s gamma=%s, %d cycle, %d batch, seed=%d",
        kind.label, params.q, params.gamma, n_cycles, len(tasks), seed,
    )
    results = deterministic_map(_cycle_batch_task, tasks, workers)
    sums, max_events = tree_reduce(results, _combine)

    n = int(sums[_N])
    b, tau0 = params.block_reward, params.tau0

    metrics = SimulatedMetrics(
        kind=kind,
        params=params,
        seed=seed,
        duration=MonteCarloEstimate.from_sums(sums[_S_TAU], sums[_SS_TAU], n, scale=tau0),
        revenue=MonteCarloEstimate.from_sums(sums[_S_REV], sums[_SS_REV], n, scale=b),
        official_blocks=MonteCarloEstimate.from_sums(sums[_S_OFF], sums[_SS_OFF], n),
        n_prime=MonteCarloEstimate.from_sums(sums[_S_NP], sums[_SS_NP], n),
        revenue_ratio=_ratio_estimate(
            sums[_S_REV], sums[_SS_REV], sums[_S_TAU], sums[_SS_TAU], sums[_S_REV_TAU], n,
            scale=b / tau0,
        ),
        delta=_ratio_estimate(
            sums[_S_TAU], sums[_SS_TAU], sums[_S_OFF], sums[_SS_OFF], sums[_S_TAU_OFF], n,
        ),
        apparent_hashrate=_ratio_estimate(
            sums[_S_REV], sums[_SS_REV], sums[_S_OFF], sums[_SS_OFF], sums[_S_REV_OFF], n,
        ),
        max_events=max_events,
    )
    logger.info(
        "Monte Carlo %s selesai: q^=%.6f (se %.2e), cycle terpanjang %d event",
        kind.label, metrics.apparent_hashrate.mean, metrics.apparent_hashrate.std_error, max_events,
    )
    return metrics


# ===============================
# pmf empiris N'(tau)
# ===============================

def _histogram_task(task: Tuple[StrategyKind, MiningParams, int, int, int, int]) -> np.ndarray:
    kind, params, seed, batch_index, size, n_max = task
    stream = RandomStream.from_seed(seed, batch_index)
    batch = simulate_batch(kind, params, size, stream)
    binned = np.minimum(batch.n_prime_at_tau, n_max + 1)
    return np.bincount(binned, minlength=n_max + 2).astype(np.int64)


def empirical_nprime_pmf(
    kind: StrategyKind,
    params: MiningParams,
    n_cycles: int,
    seed: int,
    n_max: int,
    workers: int | None = None,
) -> np.ndarray:
    """
    Frekuensi empiris N'(tau) (race LSM) atau N'(tau_EFSM): bin 0..n_max + 1 bin overflow.
    """
    if kind not in (StrategyKind.LEAD_STUBBORN, StrategyKind.EQUAL_FORK_STUBBORN):
        raise DomainError(f"empirical_nprime_pmf: hanya LSM / EFSM, dapat {kind.label}")
    if not (0 <= n_max <= race_settings.max_pmf_bins):
        raise DomainError(
            f"empirical_nprime_pmf: butuh 0 <= n_max <= {race_settings.max_pmf_bins}, dapat {n_max}"
        )
    if n_cycles < 1:
        raise DomainError(f"empirical_nprime_pmf: n_cycles harus >= 1, dapat {n_cycles}")
    params.require_attacker("empirical_nprime_pmf")

    tasks = [(kind, params, seed, index, size, n_max) for index, size in _batch_layout(n_cycles)]
    counts = tree_reduce(deterministic_map(_histogram_task, tasks, workers), lambda a, b: a + b)
    return counts / float(n_cycles)


# ===============================
# Poisson game
# ===============================

@dataclass(frozen=True)
class PoissonGameEstimate:
    duration: MonteCarloEstimate
    honest_blocks: MonteCarloEstimate


def _poisson_batch(alpha: float, alpha_prime: float, size: int, stream) -> Tuple[np.ndarray, np.ndarray]:
    rate = alpha + alpha_prime
    lead = np.zeros(size, dtype=np.int64)
    clock = np.zeros(size, dtype=float)
    n_att = np.zeros(size, dtype=np.int64)
    n_hon = np.zeros(size, dtype=np.int64)
    events = np.zeros(size, dtype=np.int64)
    # waktu dalam unit 1/(alpha + alpha'), attacker dengan prob alpha'/(alpha + alpha')
    race_until(stream, alpha_prime / rate, lead, -1, clock, n_att, n_hon, events)
    return clock / rate, n_hon


def simulate_poisson_game(alpha: float, alpha_prime: float, stream) -> Tuple[float, int]:
    """Satu race sampai N = N' + 1: return (tau, N(tau))."""
    poisson_game_expectations(alpha, alpha_prime)
    duration, honest = _poisson_batch(alpha, alpha_prime, 1, stream)
    return float(duration[0]), int(honest[0])


def _poisson_task(task: Tuple[float, float, int, int, int]) -> Tuple[np.ndarray, int]:
    alpha, alpha_prime, seed, batch_index, size = task
    stream = RandomStream.from_seed(seed, batch_index)
    duration, honest = _poisson_batch(alpha, alpha_prime, size, stream)
    blocks = honest.astype(float)
    sums = np.array(
        [size, duration.sum(), (duration * duration).sum(), blocks.sum(), (blocks * blocks).sum()],
        dtype=float,
    )
    return sums, 0


def run_poisson_game(
    alpha: float,
    alpha_prime: float,
    n_runs: int,
    seed: int,
    workers: int | None = None,
) -> PoissonGameEstimate:
    poisson_game_expectations(alpha, alpha_prime)
    if n_runs < 2:
        raise DomainError(f"run_poisson_game: n_runs harus >= 2, dapat {n_runs}")

    tasks = [(alpha, alpha_prime, seed, index, size) for index, size in _batch_layout(n_runs)]
    sums, _ = tree_reduce(deterministic_map(_poisson_task, tasks, workers), _combine)
    n = int(sums[0])
    return PoissonGameEstimate(
        duration=MonteCarloEstimate.from_sums(sums[1], sums[2], n),
        honest_blocks=MonteCarloEstimate.from_sums(sums[3], sums[4], n),
    )

# race/cycle_engine.py
# Simulasi attack cycle HM / SM / LSM / EFSM di atas dua proses Poisson yang bersaing.
#
# Unit waktu internal = tau0 (rate total 1, attacker q, honest p); durasi
# dikalikan tau0 hanya di output. Semua cycle dalam satu batch berjalan
# lockstep (vektor numpy), tiap langkah hanya cycle yang masih aktif yang
# menarik uniform baru dari stream. Race panjang diselesaikan dengan satu
# lompatan (lihat race_until), jadi biaya per cycle terbatas untuk q dekat 1/2.

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from catalan.catalan_distribution import CatalanDistribution, sample_array
from core.errors import SimulationError
from mining.mining_params import MiningParams
from race.race_settings import race_settings
from race.rng import UniformStream
from race.strategies import StrategyKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CycleOutcome:
    """
    Satu attack cycle.
    official_blocks         : blok baru di chain resmi (N v N' versi akuntansi strategi)
    attacker_blocks_official: blok attacker yang masuk chain resmi
    n_prime_at_tau          : N'(tau) pada stopping time catch-up strategi
    honest_mined / attacker_mined: N dan N' pada akhir cycle
    """

    duration: float
    attacker_revenue: float
    official_blocks: int
    attacker_blocks_official: int
    n_prime_at_tau: int
    honest_mined: int
    attacker_mined: int
    events: int


@dataclass
class CycleBatch:
    # durasi dalam unit tau0, revenue dalam jumlah blok
    duration: np.ndarray
    revenue_blocks: np.ndarray
    official_blocks: np.ndarray
    n_prime_at_tau: np.ndarray
    honest_mined: np.ndarray
    attacker_mined: np.ndarray
    events: np.ndarray

    @property
    def size(self) -> int:
        return int(self.duration.size)


def _exp_times(u: np.ndarray) -> np.ndarray:
    # Exp(1) dari uniform [0, 1)
    return -np.log1p(-u)


def last_success_index(n_draws: np.ndarray, gamma: float, u: np.ndarray) -> np.ndarray:
    """
    Indeks sukses terakhir di antara n_draws lemparan Bernoulli(gamma) (0 kalau tidak ada).

    Satu uniform per cycle: dibaca dari belakang, jarak ke sukses terakhir
    adalah Geometric(gamma) G >= 1, jadi Z = max(n + 1 - G, 0). Hukumnya sama
    persis dengan n lemparan terpisah.
    """
    n_draws = np.asarray(n_draws, dtype=np.int64)
    if gamma <= 0.0:
        return np.zeros_like(n_draws)
    if gamma >= 1.0:
        return n_draws.copy()
    ratio = np.log1p(-np.asarray(u, dtype=float)) / np.log1p(-gamma)
    ratio = np.minimum(ratio, float(2**62))
    geometric = 1 + np.floor(ratio).astype(np.int64)
    return np.maximum(n_draws + 1 - geometric, 0)


def _excursion_blocks(stream: UniformStream, q: float, drops: np.ndarray) -> np.ndarray:
    """
    Blok attacker selama lead turun `drops` langkah: tiap penurunan satu langkah
    memuat A ~ Catalan tipe pertama (p) blok attacker dan A + 1 blok honest.
    """
    if q <= 0.0:
        return np.zeros(drops.size, dtype=np.int64)
    owner = np.repeat(np.arange(drops.size), drops)
    draws = sample_array(CatalanDistribution(1.0 - q), owner.size, stream)
    attacker = np.zeros(drops.size, dtype=np.int64)
    np.add.at(attacker, owner, draws)
    return attacker


def race_until(
    stream: UniformStream,
    q: float,
    lead: np.ndarray,
    target: int,
    clock: np.ndarray,
    n_att: np.ndarray,
    n_hon: np.ndarray,
    events: np.ndarray,
) -> None:
    """
    Jalankan race in-place sampai lead (N' - N) == target untuk setiap cycle
    (lead selalu di atas target).

    Event pertama dijalankan satu per satu: uniform pertama memilih penambang
    (attacker kalau u < q), uniform kedua untuk waktu antar-blok. Setelah
    `stepped_events_per_race` event, sisa race ditarik sekaligus: jumlah blok
    dari hukum Catalan, waktu Gamma(jumlah event). Hukum hasilnya identik.
    """
    cap = race_settings.max_events_per_cycle
    active = np.flatnonzero(lead != target)
    for _ in range(race_settings.stepped_events_per_race):
        if not active.size:
            return
        k = active.size
        attacker = stream.uniforms(k) < q
        clock[active] += _exp_times(stream.uniforms(k))
        n_att[active] += attacker
        n_hon[active] += ~attacker
        lead[active] += np.where(attacker, 1, -1)
        events[active] += 1

        if events[active].max() >= cap:
            raise SimulationError(
                f"cycle melewati batas {cap} event (q={q}); race tidak berhenti"
            )
        active = active[lead[active] != target]

    if not active.size:
        return
    drops = lead[active] - target
    attacker = _excursion_blocks(stream, q, drops)
    total = 2 * attacker + drops
    n_att[active] += attacker
    n_hon[active] += attacker + drops
    events[active] += total
    clock[active] += stream.gammas(total)
    lead[active] = target


def _simulate_honest(params: MiningParams, size: int, stream: UniformStream) -> CycleBatch:
    attacker = (stream.uniforms(size) < params.q).astype(np.int64)
    duration = _exp_times(stream.uniforms(size))
    ones = np.ones(size, dtype=np.int64)
    return CycleBatch(
        duration=duration,
        revenue_blocks=attacker,
        official_blocks=ones,
        n_prime_at_tau=attacker.copy(),
        honest_mined=1 - attacker,
        attacker_mined=attacker.copy(),
        events=ones.copy(),
    )


def _first_block(params: MiningParams, size: int, stream: UniformStream):
    # blok pertama dari common root
    attacker_first = stream.uniforms(size) < params.q
    clock = _exp_times(stream.uniforms(size))
    n_att = attacker_first.astype(np.int64)
    n_hon = 1 - n_att
    events = np.ones(size, dtype=np.int64)
    return attacker_first, clock, n_att, n_hon, events


def _simulate_selfish(params: MiningParams, size: int, stream: UniformStream) -> CycleBatch:
    q, gamma = params.q, params.gamma
    attacker_first, clock, n_att, n_hon, events = _first_block(params, size, stream)

    revenue = np.zeros(size, dtype=np.int64)
    official = np.ones(size, dtype=np.int64)

    # Delta = 1: blok kedua
    lead1 = np.flatnonzero(attacker_first)
    second_att = stream.uniforms(lead1.size) < q
    clock[lead1] += _exp_times(stream.uniforms(lead1.size))
    n_att[lead1] += second_att
    n_hon[lead1] += ~second_att
    events[lead1] += 1

    # honest menyamakan → attacker publish, kompetisi satu ronde
    tie = lead1[~second_att]
    final_att = stream.uniforms(tie.size) < q
    on_fork = stream.uniforms(tie.size) < gamma
    clock[tie] += _exp_times(stream.uniforms(tie.size))
    n_att[tie] += final_att
    n_hon[tie] += ~final_att
    events[tie] += 1
    revenue[tie] = np.where(final_att, 2, np.where(on_fork, 1, 0))
    official[tie] = 2

    # Delta >= 2: lanjut sampai lead menyusut ke 1, lalu override dengan seluruh fork
    ahead = lead1[second_att]
    if ahead.size:
        lead = np.full(ahead.size, 2, dtype=np.int64)
        sub_clock = clock[ahead]
        sub_att = n_att[ahead]
        sub_hon = n_hon[ahead]
        sub_events = events[ahead]
        race_until(stream, q, lead, 1, sub_clock, sub_att, sub_hon, sub_events)
        clock[ahead] = sub_clock
        n_att[ahead] = sub_att
        n_hon[ahead] = sub_hon
        events[ahead] = sub_events
        revenue[ahead] = sub_att
        official[ahead] = sub_att

    return CycleBatch(
        duration=clock,
        revenue_blocks=revenue,
        official_blocks=official,
        n_prime_at_tau=n_att.copy(),
        honest_mined=n_hon,
        attacker_mined=n_att,
        events=events,
    )


def _simulate_lead_stubborn(params: MiningParams, size: int, stream: UniformStream) -> CycleBatch:
    q, gamma = params.q, params.gamma
    attacker_first, clock, n_att, n_hon, events = _first_block(params, size, stream)

    revenue = np.zeros(size, dtype=np.int64)
    official = np.ones(size, dtype=np.int64)
    n_prime_at_tau = np.zeros(size, dtype=np.int64)

    ahead = np.flatnonzero(attacker_first)
    if ahead.size:
        # race sampai honest menyusul: N(tau) = N'(tau)
        lead = np.ones(ahead.size, dtype=np.int64)
        sub_clock = clock[ahead]
        sub_att = n_att[ahead]
        sub_hon = n_hon[ahead]
        sub_events = events[ahead]
        race_until(stream, q, lead, 0, sub_clock, sub_att, sub_hon, sub_events)

        n = sub_att.copy()
        n_prime_at_tau[ahead] = n

        # final round: attacker (q) / honest di fork attacker (gamma p) / honest di fork honest
        final_att = stream.uniforms(ahead.size) < q
        on_fork = stream.uniforms(ahead.size) < gamma
        adopted = last_success_index(n - 1, gamma, stream.uniforms(ahead.size))
        sub_clock += _exp_times(stream.uniforms(ahead.size))
        sub_att += final_att
        sub_hon += ~final_att
        sub_events += 1

        clock[ahead] = sub_clock
        n_att[ahead] = sub_att
        n_hon[ahead] = sub_hon
        events[ahead] = sub_events
        revenue[ahead] = np.where(final_att, n + 1, np.where(on_fork, n, adopted))
        official[ahead] = n + 1

    if not np.all(np.abs(n_hon - n_att) == 1):
        raise SimulationError("paritas LSM rusak: |N - N'| != 1 di akhir cycle")

    return CycleBatch(
        duration=clock,
        revenue_blocks=revenue,
        official_blocks=official,
        n_prime_at_tau=n_prime_at_tau,
        honest_mined=n_hon,
        attacker_mined=n_att,
        events=events,
    )


def _simulate_equal_fork(params: MiningParams, size: int, stream: UniformStream) -> CycleBatch:
    q, gamma = params.q, params.gamma
    lead = np.zeros(size, dtype=np.int64)
    clock = np.zeros(size, dtype=float)
    n_att = np.zeros(size, dtype=np.int64)
    n_hon = np.zeros(size, dtype=np.int64)
    events = np.zeros(size, dtype=np.int64)

    # tau_EFSM = inf{t : N(t) = N'(t) + 1}
    race_until(stream, q, lead, -1, clock, n_att, n_hon, events)

    # n lemparan adopsi untuk n = N'(tau_EFSM), revenue = indeks sukses terakhir
    revenue = last_success_index(n_att, gamma, stream.uniforms(size))

    return CycleBatch(
        duration=clock,
        revenue_blocks=revenue,
        official_blocks=n_hon.copy(),
        n_prime_at_tau=n_att.copy(),
        honest_mined=n_hon,
        attacker_mined=n_att,
        events=events,
    )


_ENGINES = {
    StrategyKind.HONEST: _simulate_honest,
    StrategyKind.SELFISH: _simulate_selfish,
    StrategyKind.LEAD_STUBBORN: _simulate_lead_stubborn,
    StrategyKind.EQUAL_FORK_STUBBORN: _simulate_equal_fork,
}


def simulate_batch(
    kind: StrategyKind,
    params: MiningParams,
    size: int,
    stream: UniformStream,
) -> CycleBatch:
    """
    Simulasikan `size` cycle independen dari satu stream.
    """
    if kind is not StrategyKind.HONEST:
        params.require_attacker(f"simulate_batch({kind.label})")
    if size <= 0:
        raise ValueError(f"simulate_batch: size harus > 0, dapat {size}")
    return _ENGINES[kind](params, size, stream)


def simulate_cycle(
    kind: StrategyKind,
    params: MiningParams,
    stream: UniformStream,
) -> CycleOutcome:
    """
    Satu attack cycle; stream dimiliki pemanggil.
    Durasi & revenue sudah dalam unit tau0 & block_reward.
    """
    batch = simulate_batch(kind, params, 1, stream)
    blocks = int(batch.revenue_blocks[0])
    return CycleOutcome(
        duration=float(batch.duration[0]) * params.tau0,
        attacker_revenue=blocks * params.block_reward,
        official_blocks=int(batch.official_blocks[0]),
        attacker_blocks_official=blocks,
        n_prime_at_tau=int(batch.n_prime_at_tau[0]),
        honest_mined=int(batch.honest_mined[0]),
        attacker_mined=int(batch.attacker_mined[0]),
        events=int(batch.events[0]),
    )

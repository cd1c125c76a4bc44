# mining/closed_form.py
# Formula closed-form: E[tau], E[R], Gamma, delta, q~ untuk HM, LSM, EFSM.
#
# Setiap formula dievaluasi dalam bentuk aljabar seperti di teorema-nya
# (bukan hasil susun ulang), supaya selisih vs Monte Carlo menunjuk ke simulator.

from __future__ import annotations

from catalan.catalan_distribution import CatalanDistribution, CatalanKind, mean
from catalan.catalan_numbers import catalan_series
from core.errors import DomainError
from mining.mining_params import MiningParams, StrategyMetrics
from race.strategies import StrategyKind


def _require_gamma(params: MiningParams, what: str, limit_mode: bool) -> bool:
    """
    True kalau gamma = 0 dan harus dievaluasi lewat nilai limit.
    Tanpa limit mode, gamma = 0 → DomainError (tidak ada ekstrapolasi diam-diam).
    """
    if params.gamma > 0.0:
        return False
    if limit_mode:
        return True
    raise DomainError(
        f"{what}: gamma = 0 adalah singularitas 0/0 formula; "
        f"pakai limit_mode=True untuk nilai limit gamma -> 0+"
    )


def _catalan_term(params: MiningParams) -> float:
    # C((1 - gamma) p q)
    p, q, g = params.p, params.q, params.gamma
    return catalan_series((1.0 - g) * p * q)


# ===============================
# HM: Honest Mining (baseline)
# ===============================

def revenue_ratio_hm(params: MiningParams) -> StrategyMetrics:
    q, b, tau0 = params.q, params.block_reward, params.tau0
    return StrategyMetrics(
        revenue_ratio=q * b / tau0,
        delta=1.0,
        apparent_hashrate=q,
        expected_cycle_duration=tau0,
        expected_cycle_revenue=q * b,
    )


# ===============================
# LSM: Lead-Stubborn Mining
# ===============================

def expected_catchup_duration_lsm(params: MiningParams) -> float:
    """E[tau] = p / (p - q) * tau0 (sebelum final round)."""
    p, q = params.p, params.q
    return p / (p - q) * params.tau0


def expected_cycle_duration_lsm(params: MiningParams) -> float:
    """E[tau_LSM] = E[tau] + q tau0 = (p + pq - q^2) / (p - q) * tau0."""
    p, q = params.p, params.q
    return (p + p * q - q * q) / (p - q) * params.tau0


def f_gamma(params: MiningParams, limit_mode: bool = False) -> float:
    """
    f(gamma) = (pq(1-gamma)/gamma) * (1 - p(1-gamma) C((1-gamma)pq)).
    Limit gamma -> 0+: p^2 q / (p - q).
    """
    p, q, g = params.p, params.q, params.gamma
    if _require_gamma(params, "f_gamma", limit_mode):
        return p * p * q / (p - q)
    return (p * q * (1.0 - g) / g) * (1.0 - p * (1.0 - g) * _catalan_term(params))


def expected_revenue_lsm(params: MiningParams, limit_mode: bool = False) -> float:
    """E[R_LSM] = (p/(p-q) + q) q b - f(gamma) b."""
    params.require_attacker("expected_revenue_lsm")
    p, q, b = params.p, params.q, params.block_reward
    return (p / (p - q) + q) * q * b - f_gamma(params, limit_mode) * b


def delta_lsm(params: MiningParams) -> float:
    """delta_LSM = (p + pq - q^2) / (p + pq - q) > 1."""
    p, q = params.p, params.q
    return (p + p * q - q * q) / (p + p * q - q)


def expected_official_blocks_lsm(params: MiningParams) -> float:
    """E[N v N'] pada akhir cycle LSM = E[tau_LSM] / (2 tau0) + 1/2."""
    return expected_cycle_duration_lsm(params) / (2.0 * params.tau0) + 0.5


def expected_nprime_lsm(params: MiningParams) -> float:
    """E[N'(tau)] = pq / (p - q): mean Catalan tipe kedua."""
    return mean(CatalanDistribution(params.p, CatalanKind.SECOND_TYPE))


def revenue_ratio_lsm(params: MiningParams, limit_mode: bool = False) -> StrategyMetrics:
    params.require_attacker("revenue_ratio_lsm")
    p, q, g = params.p, params.q, params.gamma
    b, tau0 = params.block_reward, params.tau0

    duration = expected_cycle_duration_lsm(params)
    revenue = expected_revenue_lsm(params, limit_mode)
    delta = delta_lsm(params)

    if _require_gamma(params, "revenue_ratio_lsm", limit_mode):
        gamma_ratio = revenue / duration
        apparent = gamma_ratio * delta * tau0 / b
    else:
        c = _catalan_term(params)
        penalty = p * q * (p - q) * (1.0 - g) / g
        gamma_ratio = (
            q - penalty * (1.0 - p * (1.0 - g) * c) / (p + q * (p - q))
        ) * b / tau0
        apparent = (
            q * (p + p * q - q * q) / (p + p * q - q)
            - penalty * (1.0 - p * (1.0 - g) * c) / (p + p * q - q)
        )

    return StrategyMetrics(
        revenue_ratio=gamma_ratio,
        delta=delta,
        apparent_hashrate=apparent,
        expected_cycle_duration=duration,
        expected_cycle_revenue=revenue,
    )


# ===============================
# EFSM: Equal-Fork Stubborn Mining
# ===============================

def expected_cycle_duration_efsm(params: MiningParams) -> float:
    """E[tau_EFSM] = tau0 / (p - q)."""
    p, q = params.p, params.q
    return params.tau0 / (p - q)


def g_gamma(params: MiningParams, limit_mode: bool = False) -> float:
    """
    g(gamma) = ((1-gamma)/gamma) * (1 - p C((1-gamma)pq)).
    Limit gamma -> 0+: q / (p - q).
    """
    p, q, g = params.p, params.q, params.gamma
    if _require_gamma(params, "g_gamma", limit_mode):
        return q / (p - q)
    return ((1.0 - g) / g) * (1.0 - p * _catalan_term(params))


def expected_revenue_efsm(params: MiningParams, limit_mode: bool = False) -> float:
    """E[R_EFSM] = (q/(p-q)) b - g(gamma) b."""
    params.require_attacker("expected_revenue_efsm")
    p, q, b = params.p, params.q, params.block_reward
    if _require_gamma(params, "expected_revenue_efsm", limit_mode):
        # g(0+) = q/(p-q) persis menghapus suku pertama
        return 0.0
    return (q / (p - q)) * b - g_gamma(params) * b


def delta_efsm(params: MiningParams) -> float:
    """delta_EFSM = 1 / p."""
    return 1.0 / params.p


def expected_official_blocks_efsm(params: MiningParams) -> float:
    """E[N(tau_EFSM)] = p / (p - q): chain honest menang race dengan selisih satu."""
    p, q = params.p, params.q
    return p / (p - q)


def expected_nprime_efsm(params: MiningParams) -> float:
    """E[N'(tau_EFSM)] = q / (p - q): mean Catalan tipe pertama."""
    return mean(CatalanDistribution(params.p, CatalanKind.FIRST_TYPE))


def revenue_ratio_efsm(params: MiningParams, limit_mode: bool = False) -> StrategyMetrics:
    params.require_attacker("revenue_ratio_efsm")
    p, q, g = params.p, params.q, params.gamma
    b, tau0 = params.block_reward, params.tau0

    duration = expected_cycle_duration_efsm(params)
    revenue = expected_revenue_efsm(params, limit_mode)
    delta = delta_efsm(params)

    if _require_gamma(params, "revenue_ratio_efsm", limit_mode):
        gamma_ratio = 0.0
        apparent = 0.0
    else:
        shortfall = 1.0 - p * _catalan_term(params)
        gamma_ratio = (q - ((1.0 - g) / g) * (p - q) * shortfall) * b / tau0
        apparent = q / p - ((1.0 - g) * (p - q) / (g * p)) * shortfall

    return StrategyMetrics(
        revenue_ratio=gamma_ratio,
        delta=delta,
        apparent_hashrate=apparent,
        expected_cycle_duration=duration,
        expected_cycle_revenue=revenue,
    )


# ===============================
# Dispatcher
# ===============================

def analytic_metrics(
    kind: StrategyKind,
    params: MiningParams,
    limit_mode: bool = False,
) -> StrategyMetrics:
    """
    Metrics closed-form per strategi.
    SM tidak punya closed form di sini → DomainError (pakai simulator).
    """
    if kind is StrategyKind.HONEST:
        return revenue_ratio_hm(params)
    if kind is StrategyKind.LEAD_STUBBORN:
        return revenue_ratio_lsm(params, limit_mode)
    if kind is StrategyKind.EQUAL_FORK_STUBBORN:
        return revenue_ratio_efsm(params, limit_mode)
    raise DomainError(f"{kind.label}: tidak ada closed form, gunakan simulasi Monte Carlo")


def expected_nprime(kind: StrategyKind, params: MiningParams) -> float:
    if kind is StrategyKind.LEAD_STUBBORN:
        return expected_nprime_lsm(params)
    if kind is StrategyKind.EQUAL_FORK_STUBBORN:
        return expected_nprime_efsm(params)
    raise DomainError(f"{kind.label}: E[N'] closed form hanya untuk LSM / EFSM")


def expected_official_blocks(kind: StrategyKind, params: MiningParams) -> float:
    if kind is StrategyKind.HONEST:
        return 1.0
    if kind is StrategyKind.LEAD_STUBBORN:
        return expected_official_blocks_lsm(params)
    if kind is StrategyKind.EQUAL_FORK_STUBBORN:
        return expected_official_blocks_efsm(params)
    raise DomainError(f"{kind.label}: tidak ada closed form, gunakan simulasi Monte Carlo")

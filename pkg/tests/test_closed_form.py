# tests/test_closed_form.py
import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st

from core.errors import DomainError
from mining.closed_form import (
    analytic_metrics,
    delta_efsm,
    delta_lsm,
    expected_cycle_duration_efsm,
    expected_cycle_duration_lsm,
    expected_nprime,
    expected_official_blocks,
    expected_official_blocks_lsm,
    expected_revenue_efsm,
    expected_revenue_lsm,
    f_gamma,
    g_gamma,
    revenue_ratio_efsm,
    revenue_ratio_hm,
    revenue_ratio_lsm,
)
from mining.mining_params import MiningParams
from race.strategies import StrategyKind

qs = st.floats(min_value=0.01, max_value=0.49)
gammas = st.floats(min_value=0.01, max_value=1.0)
scales = st.floats(min_value=0.1, max_value=1000.0)


def test_reference_point_q03_gamma05():
    params = MiningParams(q=0.3, gamma=0.5)
    assert revenue_ratio_lsm(params).apparent_hashrate == pytest.approx(0.320294, abs=1e-6)
    assert revenue_ratio_efsm(params).apparent_hashrate == pytest.approx(0.311282, abs=1e-6)
    assert expected_revenue_lsm(params) == pytest.approx(0.488448, abs=1e-6)
    assert expected_revenue_efsm(params) == pytest.approx(0.544744, abs=1e-6)
    assert delta_lsm(params) == pytest.approx(1.344262, abs=1e-6)
    assert expected_cycle_duration_lsm(params) == pytest.approx(2.05)
    assert expected_cycle_duration_efsm(params) == pytest.approx(2.5)
    assert expected_official_blocks_lsm(params) == pytest.approx(1.525)


def test_honest_baseline():
    m = revenue_ratio_hm(MiningParams(q=0.3, block_reward=6.25, tau0=600.0))
    assert m.apparent_hashrate == 0.3
    assert m.delta == 1.0
    assert m.revenue_ratio == pytest.approx(0.3 * 6.25 / 600.0)


def test_honest_allows_zero_hashrate():
    assert analytic_metrics(StrategyKind.HONEST, MiningParams(q=0.0)).apparent_hashrate == 0.0


def test_gamma_one():
    params = MiningParams(q=0.4, gamma=1.0)
    assert revenue_ratio_efsm(params).apparent_hashrate == pytest.approx(0.4 / 0.6)
    assert revenue_ratio_lsm(params).apparent_hashrate == pytest.approx(0.4 * 0.68 / 0.44)


@pytest.mark.parametrize("p", [0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95])
def test_delta_efsm_is_inverse_p(p):
    params = MiningParams(q=1 - p, gamma=0.5)
    assert abs(delta_efsm(params) - 1.0 / p) < 1e-12


@given(qs, gammas)
def test_delta_lsm_above_one(q, gamma):
    assert delta_lsm(MiningParams(q=q, gamma=gamma)) > 1.0


@given(qs, gammas, scales, scales)
def test_chain_identity(q, gamma, b, tau0):
    params = MiningParams(q=q, gamma=gamma, block_reward=b, tau0=tau0)
    for metrics in (revenue_ratio_lsm(params), revenue_ratio_efsm(params)):
        chained = metrics.revenue_ratio * metrics.delta * tau0 / b
        assert chained == pytest.approx(metrics.apparent_hashrate, rel=1e-9, abs=1e-12)


@given(qs, gammas, scales, scales)
def test_revenue_ratio_is_revenue_over_duration(q, gamma, b, tau0):
    params = MiningParams(q=q, gamma=gamma, block_reward=b, tau0=tau0)
    for metrics in (revenue_ratio_lsm(params), revenue_ratio_efsm(params)):
        ratio = metrics.expected_cycle_revenue / metrics.expected_cycle_duration
        assert metrics.revenue_ratio == pytest.approx(ratio, rel=1e-9, abs=1e-12)


@given(qs, gammas)
def test_delta_matches_official_block_accounting(q, gamma):
    params = MiningParams(q=q, gamma=gamma)
    for kind in (StrategyKind.LEAD_STUBBORN, StrategyKind.EQUAL_FORK_STUBBORN):
        m = analytic_metrics(kind, params)
        ratio = m.expected_cycle_duration / expected_official_blocks(kind, params)
        assert m.delta == pytest.approx(ratio, rel=1e-12)


@given(qs, gammas)
def test_expected_revenue_non_negative(q, gamma):
    params = MiningParams(q=q, gamma=gamma)
    assert expected_revenue_lsm(params) >= -1e-12
    assert expected_revenue_efsm(params) >= -1e-12


def test_expected_nprime():
    params = MiningParams(q=0.3, gamma=0.5)
    assert expected_nprime(StrategyKind.LEAD_STUBBORN, params) == pytest.approx(0.21 / 0.4)
    assert expected_nprime(StrategyKind.EQUAL_FORK_STUBBORN, params) == pytest.approx(0.75)
    with pytest.raises(DomainError):
        expected_nprime(StrategyKind.HONEST, params)


def test_adjusted_revenue_ratio():
    m = revenue_ratio_efsm(MiningParams(q=0.3, gamma=0.5))
    assert m.adjusted_revenue_ratio == pytest.approx(m.revenue_ratio / 0.7)


# ===============================
# gamma = 0
# ===============================

def test_gamma_zero_requires_limit_mode():
    params = MiningParams(q=0.3, gamma=0.0)
    for fn in (f_gamma, g_gamma, expected_revenue_lsm, expected_revenue_efsm,
               revenue_ratio_lsm, revenue_ratio_efsm):
        with pytest.raises(DomainError):
            fn(params)


def test_gamma_zero_limit_values():
    params = MiningParams(q=0.3, gamma=0.0)
    assert f_gamma(params, limit_mode=True) == pytest.approx(0.49 * 0.3 / 0.4)
    assert g_gamma(params, limit_mode=True) == pytest.approx(0.75)
    assert expected_revenue_efsm(params, limit_mode=True) == 0.0
    assert expected_revenue_lsm(params, limit_mode=True) == pytest.approx(0.09 * 1.1 / 0.4)
    assert revenue_ratio_efsm(params, limit_mode=True).apparent_hashrate == 0.0


@pytest.mark.parametrize("q", [0.05, 0.3, 0.4])
def test_limit_mode_is_continuous(q):
    exact = MiningParams(q=q, gamma=0.0)
    near = MiningParams(q=q, gamma=1e-7)
    assert f_gamma(near) == pytest.approx(f_gamma(exact, limit_mode=True), rel=1e-3)
    assert g_gamma(near) == pytest.approx(g_gamma(exact, limit_mode=True), rel=1e-3)
    lim = revenue_ratio_lsm(exact, limit_mode=True).apparent_hashrate
    assert revenue_ratio_lsm(near).apparent_hashrate == pytest.approx(lim, rel=1e-3)


@pytest.mark.parametrize("fn", [revenue_ratio_lsm, revenue_ratio_efsm])
def test_apparent_hashrate_non_decreasing_in_gamma(fn):
    gammas = np.linspace(0.01, 0.99, 99)
    for q in np.linspace(0.01, 0.49, 25):
        values = np.array([fn(MiningParams(q=float(q), gamma=float(g))).apparent_hashrate for g in gammas])
        assert np.all(np.diff(values) >= -1e-12), q


def test_selfish_has_no_closed_form():
    with pytest.raises(DomainError):
        analytic_metrics(StrategyKind.SELFISH, MiningParams(q=0.3, gamma=0.5))


def test_deviant_strategies_need_hashrate():
    with pytest.raises(DomainError):
        revenue_ratio_lsm(MiningParams(q=0.0, gamma=0.5))


@pytest.mark.parametrize(
    "kwargs",
    [dict(q=0.5), dict(q=-0.1), dict(q=0.3, gamma=1.5), dict(q=0.3, block_reward=0.0), dict(q=0.3, tau0=-1.0)],
)
def test_params_validation(kwargs):
    with pytest.raises(DomainError):
        MiningParams(**kwargs)


def test_params_expose_only_environment():
    params = MiningParams(q=0.3, gamma=0.5)
    assert [f.name for f in dataclasses.fields(params)] == ["q", "gamma", "block_reward", "tau0"]
    assert params.p == pytest.approx(0.7)
    # rate Poisson game diberikan langsung ke run_poisson_game
    assert not hasattr(params, "alpha")
    assert not hasattr(params, "alpha_prime")

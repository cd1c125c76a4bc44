# cli/cli_commands.py
# Command tervalidasi & dispatcher run(command, out) -> exit status.

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, TextIO, Tuple, Union

import pandas as pd

from catalan.catalan_distribution import CatalanDistribution, CatalanKind, cdf, pmf_table, sample
from cli.cli_common import fmt_value, write_estimate, write_kv, write_pairs
from core.errors import DomainError, EmitError, SimulationError
from mining.closed_form import analytic_metrics, expected_nprime, expected_official_blocks
from mining.mining_params import MiningParams
from mining.race_expectations import poisson_game_expectations
from race.monte_carlo import (
    MonteCarloEstimate,
    empirical_nprime_pmf,
    run_monte_carlo,
    run_poisson_game,
)
from race.rng import RandomStream
from race.strategies import STRATEGY_ORDER, StrategyKind
from sweep.classifier import SmMode, compute_map
from sweep.emitter import MapFormat, write_map
from sweep.grid import GridSpec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4
EXIT_SIMULATION = 5


@dataclass(frozen=True)
class EvalCommand:
    strategy: StrategyKind
    params: MiningParams
    limit_mode: bool = False


@dataclass(frozen=True)
class SimulateCommand:
    strategy: StrategyKind
    params: MiningParams
    n_cycles: int
    seed: int


@dataclass(frozen=True)
class ValidateCommand:
    strategy: StrategyKind
    params: MiningParams
    n_cycles: int
    seed: int
    sigmas: float


@dataclass(frozen=True)
class DistCommand:
    distribution: CatalanDistribution
    n_max: int
    samples: int
    seed: int
    # "sample" = inverse-CDF sampling, "race" = N' dari simulasi race LSM / EFSM
    source: str = "sample"


@dataclass(frozen=True)
class MapCommand:
    grid: GridSpec
    sm_mode: SmMode
    fmt: MapFormat
    output: Path


@dataclass(frozen=True)
class GameCommand:
    alpha: float
    alpha_prime: float
    n_runs: int
    seed: int


Command = Union[EvalCommand, SimulateCommand, ValidateCommand, DistCommand, MapCommand, GameCommand]


def _write_params(out: TextIO, strategy: StrategyKind, params: MiningParams) -> None:
    write_pairs(out, [
        ("strategy", strategy.label),
        ("q", params.q),
        ("gamma", params.gamma),
        ("block_reward", params.block_reward),
        ("tau0", params.tau0),
    ])


def _run_eval(cmd: EvalCommand, out: TextIO) -> int:
    metrics = analytic_metrics(cmd.strategy, cmd.params, cmd.limit_mode)
    _write_params(out, cmd.strategy, cmd.params)
    write_pairs(out, [
        ("revenue_ratio", metrics.revenue_ratio),
        ("delta", metrics.delta),
        ("q_tilde", metrics.apparent_hashrate),
        ("adjusted_revenue_ratio", metrics.adjusted_revenue_ratio),
        ("expected_duration", metrics.expected_cycle_duration),
        ("expected_revenue", metrics.expected_cycle_revenue),
        ("expected_official_blocks", expected_official_blocks(cmd.strategy, cmd.params)),
    ])
    if cmd.strategy is not StrategyKind.HONEST:
        write_kv(out, "expected_nprime", expected_nprime(cmd.strategy, cmd.params))
    return EXIT_OK


def _run_simulate(cmd: SimulateCommand, out: TextIO) -> int:
    metrics = run_monte_carlo(cmd.strategy, cmd.params, cmd.n_cycles, cmd.seed)
    _write_params(out, cmd.strategy, cmd.params)
    write_pairs(out, [("cycles", metrics.n_cycles), ("seed", cmd.seed)])
    write_estimate(out, "duration", metrics.duration)
    write_estimate(out, "revenue", metrics.revenue)
    write_estimate(out, "official_blocks", metrics.official_blocks)
    write_estimate(out, "n_prime", metrics.n_prime)
    write_estimate(out, "revenue_ratio", metrics.revenue_ratio)
    write_estimate(out, "delta", metrics.delta)
    write_estimate(out, "q_hat", metrics.apparent_hashrate)
    write_kv(out, "max_events", metrics.max_events)
    return EXIT_OK


def _validation_checks(cmd: ValidateCommand, metrics) -> List[Tuple[str, MonteCarloEstimate, float]]:
    kind, params = cmd.strategy, cmd.params
    # simulasi di gamma = 0 valid, jadi pembanding closed form pakai nilai limit
    expected = analytic_metrics(kind, params, limit_mode=True)
    checks = [
        ("duration", metrics.duration, expected.expected_cycle_duration),
        ("revenue", metrics.revenue, expected.expected_cycle_revenue),
        ("official_blocks", metrics.official_blocks, expected_official_blocks(kind, params)),
        ("revenue_ratio", metrics.revenue_ratio, expected.revenue_ratio),
        ("delta", metrics.delta, expected.delta),
        ("q_hat", metrics.apparent_hashrate, expected.apparent_hashrate),
    ]
    if kind is not StrategyKind.HONEST:
        checks.append(("n_prime", metrics.n_prime, expected_nprime(kind, params)))
    return checks


def _run_validate(cmd: ValidateCommand, out: TextIO) -> int:
    metrics = run_monte_carlo(cmd.strategy, cmd.params, cmd.n_cycles, cmd.seed)
    _write_params(out, cmd.strategy, cmd.params)
    write_pairs(out, [("cycles", metrics.n_cycles), ("seed", cmd.seed), ("sigmas", float(cmd.sigmas))])

    if cmd.strategy is StrategyKind.SELFISH:
        # SM tidak punya closed form: laporkan estimasi saja
        write_estimate(out, "duration", metrics.duration)
        write_estimate(out, "revenue", metrics.revenue)
        write_estimate(out, "delta", metrics.delta)
        write_estimate(out, "q_hat", metrics.apparent_hashrate)
        write_kv(out, "status", "SKIP")
        return EXIT_OK

    failed = []
    for name, estimate, target in _validation_checks(cmd, metrics):
        z = estimate.z_score(target)
        ok = abs(z) <= cmd.sigmas
        out.write(
            f"check={name} simulated={fmt_value(estimate.mean)} "
            f"expected={fmt_value(target)} se={fmt_value(estimate.std_error)} "
            f"z={fmt_value(z)} status={'PASS' if ok else 'FAIL'}\n"
        )
        if not ok:
            failed.append(name)

    write_kv(out, "status", "PASS" if not failed else "FAIL")
    if failed:
        logger.warning("validasi %s gagal: %s", cmd.strategy.label, ", ".join(failed))
        return EXIT_VALIDATION
    return EXIT_OK


def _empirical_frequencies(cmd: DistCommand) -> List[float]:
    dist = cmd.distribution
    if cmd.source == "race":
        # tipe kedua = N'(tau) race LSM, tipe pertama = N'(tau_EFSM); gamma tidak berpengaruh
        kind = (
            StrategyKind.LEAD_STUBBORN
            if dist.kind is CatalanKind.SECOND_TYPE
            else StrategyKind.EQUAL_FORK_STUBBORN
        )
        freq = empirical_nprime_pmf(kind, MiningParams(q=dist.q), cmd.samples, cmd.seed, cmd.n_max)
        return [float(x) for x in freq[:cmd.n_max + 1]]

    stream = RandomStream.from_seed(cmd.seed, 0)
    draws = pd.Series([sample(dist, stream) for _ in range(cmd.samples)])
    counts = draws.value_counts(normalize=True)
    return [float(counts.get(n, 0.0)) for n in range(cmd.n_max + 1)]


def _run_dist(cmd: DistCommand, out: TextIO) -> int:
    dist = cmd.distribution
    table = pd.DataFrame({
        "n": range(cmd.n_max + 1),
        "pmf": pmf_table(dist, cmd.n_max),
        "cdf": [cdf(dist, n) for n in range(cmd.n_max + 1)],
    })
    if cmd.samples > 0:
        table["empirical"] = _empirical_frequencies(cmd)

    write_pairs(out, [
        ("kind", dist.kind.value),
        ("p", dist.p),
        ("n_max", cmd.n_max),
        ("samples", cmd.samples),
        ("source", cmd.source),
    ])
    out.write(table.to_string(index=False, float_format=lambda x: f"{x:#.9g}") + "\n")
    return EXIT_OK


def _run_map(cmd: MapCommand, out: TextIO) -> int:
    region_map = compute_map(cmd.grid, cmd.sm_mode)
    n_bytes = write_map(region_map, cmd.fmt, cmd.output, cmd.sm_mode.label)
    counts = region_map.region_counts()
    write_pairs(out, [
        ("output", str(cmd.output)),
        ("format", cmd.fmt.value),
        ("bytes", n_bytes),
        ("cells", cmd.grid.size),
    ])
    for kind in STRATEGY_ORDER:
        write_kv(out, f"cells_{kind.value}", counts[kind])
    return EXIT_OK


def _run_game(cmd: GameCommand, out: TextIO) -> int:
    expected_tau, expected_n = poisson_game_expectations(cmd.alpha, cmd.alpha_prime)
    estimate = run_poisson_game(cmd.alpha, cmd.alpha_prime, cmd.n_runs, cmd.seed)
    write_pairs(out, [
        ("alpha", cmd.alpha),
        ("alpha_prime", cmd.alpha_prime),
        ("runs", cmd.n_runs),
        ("seed", cmd.seed),
        ("expected_tau", expected_tau),
        ("expected_honest_blocks", expected_n),
    ])
    write_estimate(out, "tau", estimate.duration)
    write_estimate(out, "honest_blocks", estimate.honest_blocks)
    return EXIT_OK


_HANDLERS = {
    EvalCommand: _run_eval,
    SimulateCommand: _run_simulate,
    ValidateCommand: _run_validate,
    DistCommand: _run_dist,
    MapCommand: _run_map,
    GameCommand: _run_game,
}


def run(command: Command, out: TextIO, err: TextIO | None = None) -> int:
    """
    Jalankan command, tulis laporan ke out dan pesan error ke err (default stderr).
    0 = ok, 2 = argumen / domain, 3 = validasi gagal, 4 = I/O, 5 = simulator gagal.
    """
    err = err if err is not None else sys.stderr
    handler = _HANDLERS[type(command)]
    try:
        return handler(command, out)
    except DomainError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except (EmitError, OSError) as e:
        print(f"error: {e}", file=err)
        return EXIT_IO
    except SimulationError as e:
        logger.error("simulasi gagal: %s", e)
        print(f"error: {e}", file=err)
        return EXIT_SIMULATION

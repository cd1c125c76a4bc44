# cli/cli_core.py
# Parsing argumen (argparse) → Command, lalu dispatch ke cli_commands.run.

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from catalan.catalan_distribution import CatalanDistribution, CatalanKind
from cli.cli_commands import (
    EXIT_USAGE,
    Command,
    DistCommand,
    EvalCommand,
    GameCommand,
    MapCommand,
    SimulateCommand,
    ValidateCommand,
    run,
)
from config import DEFAULT_CYCLES, DEFAULT_SEED, DEFAULT_SM_CYCLES
from core.errors import DomainError
from core.lab_state import state
from mining.mining_params import MiningParams
from race.race_settings import race_settings
from race.strategies import StrategyKind
from sweep.classifier import SmMode
from sweep.emitter import MapFormat
from sweep.grid import Q_EPSILON, GridSpec

logger = logging.getLogger(__name__)

GLOSSARY = """\
parameter:
  q             hashrate relatif attacker, 0 < q < 1/2 (q = 0 hanya untuk hm)
  gamma         fraksi hashrate honest yang menambang di atas fork attacker saat tie, 0 <= gamma <= 1
  block-reward  b, reward per blok resmi (default 1)
  tau0          rata-rata waktu antar blok seluruh network (default 1)

strategi:
  hm    honest mining (baseline, q~ = q)
  sm    selfish mining (hanya simulasi)
  lsm   lead-stubborn mining
  efsm  equal-fork stubborn mining

istilah:
  revenue ratio      Gamma = E[R] / E[tau] per attack cycle
  delta              faktor difficulty adjustment E[tau] / (tau0 E[N v N'])
  apparent hashrate  q~ = Gamma delta tau0 / b, fraksi blok resmi milik attacker

exit code: 0 ok, 2 argumen / domain, 3 validasi gagal, 4 I/O, 5 simulator gagal
env: STUBBORN_LAB_THREADS (0 = semua CPU), STUBBORN_LAB_LOG_LEVEL, STUBBORN_LAB_DEBUG
"""


def _add_params_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", required=True, choices=[k.value for k in StrategyKind],
                   help="strategi: hm | sm | lsm | efsm")
    p.add_argument("--q", type=float, required=True, help="hashrate relatif attacker")
    p.add_argument("--gamma", type=float, default=0.0, help="fraksi honest di fork attacker (default 0)")
    p.add_argument("--block-reward", type=float, default=1.0, help="reward per blok b (default 1)")
    p.add_argument("--tau0", type=float, default=1.0, help="waktu antar blok tau0 (default 1)")


def _add_run_flags(p: argparse.ArgumentParser, default_cycles: int) -> None:
    p.add_argument("--cycles", type=int, default=default_cycles,
                   help=f"jumlah attack cycle (default {default_cycles}, minimal {race_settings.min_cycles})")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed 64-bit (default {DEFAULT_SEED})")
    p.add_argument("--threads", type=int, default=None,
                   help="jumlah worker process (0 = semua CPU; default dari STUBBORN_LAB_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stubborn-lab",
        description="Profitabilitas stubborn mining: closed form, Monte Carlo, peta region (q, gamma).",
        epilog=GLOSSARY,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(
            name, help=help_text, description=help_text, epilog=GLOSSARY,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )

    p_eval = add("eval", "evaluasi closed form Gamma, delta, q~, E[tau], E[R]")
    _add_params_flags(p_eval)
    p_eval.add_argument("--limit-mode", action="store_true",
                        help="di gamma = 0 pakai nilai limit gamma -> 0+ (tanpa flag: error)")

    p_sim = add("simulate", "estimasi Monte Carlo dengan standard error")
    _add_params_flags(p_sim)
    _add_run_flags(p_sim, DEFAULT_CYCLES)

    p_val = add("validate", "bandingkan Monte Carlo vs closed form (exit 3 kalau menyimpang)")
    _add_params_flags(p_val)
    _add_run_flags(p_val, DEFAULT_CYCLES)
    p_val.add_argument("--sigmas", type=float, default=race_settings.default_sigmas,
                       help=f"toleransi dalam standard error (default {race_settings.default_sigmas:g})")

    p_dist = add("dist", "tabel pmf (p,q)-Catalan + frekuensi empiris")
    p_dist.add_argument("--kind", choices=[k.value for k in CatalanKind], default="first",
                        help="tipe distribusi: first | second (default first)")
    p_dist.add_argument("--p", type=float, required=True, help="parameter p, 1/2 < p < 1")
    p_dist.add_argument("--n-max", type=int, default=10, help="n terbesar di tabel (default 10)")
    p_dist.add_argument("--samples", type=int, default=100000,
                        help="jumlah sampel empiris (0 = tanpa kolom empiris; default 100000)")
    p_dist.add_argument("--source", choices=["sample", "race"], default="sample",
                        help="asal frekuensi empiris: sampling inverse-CDF atau simulasi race (default sample)")
    p_dist.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed (default {DEFAULT_SEED})")
    p_dist.add_argument("--threads", type=int, default=None, help="jumlah worker process")

    p_map = add("map", "peta strategi terbaik di grid (q, gamma)")
    p_map.add_argument("--q-min", type=float, default=Q_EPSILON, help=f"default {Q_EPSILON:g}")
    p_map.add_argument("--q-max", type=float, default=0.5 - Q_EPSILON, help=f"default {0.5 - Q_EPSILON:g}")
    p_map.add_argument("--gamma-min", type=float, default=0.0, help="default 0")
    p_map.add_argument("--gamma-max", type=float, default=1.0, help="default 1")
    p_map.add_argument("--q-steps", type=int, default=101, help="jumlah titik q (default 101)")
    p_map.add_argument("--gamma-steps", type=int, default=101, help="jumlah titik gamma (default 101)")
    p_map.add_argument("--sm-mode", choices=["simulate", "skip"], default="simulate",
                       help="skor SM: simulasi per cell atau 0 (default simulate)")
    p_map.add_argument("--sm-cycles", type=int, default=DEFAULT_SM_CYCLES,
                       help=f"cycle SM per cell (default {DEFAULT_SM_CYCLES})")
    p_map.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed (default {DEFAULT_SEED})")
    p_map.add_argument("--format", choices=[f.value for f in MapFormat], default="csv",
                       help="format output: csv | ppm (default csv)")
    p_map.add_argument("--output", type=Path, required=True, help="path file output")
    p_map.add_argument("--threads", type=int, default=None, help="jumlah worker process")

    p_game = add("game", "Poisson game: race sampai N = N' + 1, simulasi vs E[tau], E[N(tau)]")
    p_game.add_argument("--alpha", type=float, required=True, help="rate blok honest")
    p_game.add_argument("--alpha-prime", type=float, required=True, help="rate blok attacker")
    p_game.add_argument("--runs", type=int, default=DEFAULT_CYCLES, help=f"jumlah race (default {DEFAULT_CYCLES})")
    p_game.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed (default {DEFAULT_SEED})")
    p_game.add_argument("--threads", type=int, default=None, help="jumlah worker process")

    return parser


def _params(args: argparse.Namespace) -> MiningParams:
    return MiningParams(q=args.q, gamma=args.gamma, block_reward=args.block_reward, tau0=args.tau0)


def _require_cycles(n_cycles: int) -> None:
    if n_cycles < race_settings.min_cycles:
        raise DomainError(f"--cycles minimal {race_settings.min_cycles}, dapat {n_cycles}")


def build_command(args: argparse.Namespace) -> Command:
    """Validasi semua angka sebelum dispatch; pelanggaran → DomainError."""
    if args.command == "eval":
        return EvalCommand(StrategyKind.from_flag(args.strategy), _params(args), args.limit_mode)

    if args.command == "simulate":
        _require_cycles(args.cycles)
        return SimulateCommand(StrategyKind.from_flag(args.strategy), _params(args), args.cycles, args.seed)

    if args.command == "validate":
        _require_cycles(args.cycles)
        if not args.sigmas > 0:
            raise DomainError(f"--sigmas harus > 0, dapat {args.sigmas}")
        return ValidateCommand(
            StrategyKind.from_flag(args.strategy), _params(args), args.cycles, args.seed, args.sigmas
        )

    if args.command == "dist":
        if args.n_max < 0:
            raise DomainError(f"--n-max harus >= 0, dapat {args.n_max}")
        if args.samples < 0:
            raise DomainError(f"--samples harus >= 0, dapat {args.samples}")
        if args.source == "race" and args.n_max > race_settings.max_pmf_bins:
            raise DomainError(f"--n-max maksimal {race_settings.max_pmf_bins} untuk --source race")
        return DistCommand(
            CatalanDistribution(args.p, CatalanKind(args.kind)),
            args.n_max, args.samples, args.seed, args.source,
        )

    if args.command == "map":
        grid = GridSpec(
            q_min=args.q_min, q_max=args.q_max,
            gamma_min=args.gamma_min, gamma_max=args.gamma_max,
            q_steps=args.q_steps, gamma_steps=args.gamma_steps,
        )
        if args.sm_mode == "simulate":
            _require_cycles(args.sm_cycles)
            sm_mode = SmMode.simulated(args.sm_cycles, args.seed)
        else:
            sm_mode = SmMode.skip()
        return MapCommand(grid, sm_mode, MapFormat.from_flag(args.format), args.output)

    if args.command == "game":
        if args.runs < 2:
            raise DomainError(f"--runs harus >= 2, dapat {args.runs}")
        return GameCommand(args.alpha, args.alpha_prime, args.runs, args.seed)

    raise DomainError(f"command tidak dikenal: {args.command}")


def main(
    argv: Optional[List[str]] = None,
    out: Optional[TextIO] = None,
    err: Optional[TextIO] = None,
) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse: --help → 0, flag tidak dikenal / nilai salah → 2
        return int(e.code or 0)

    threads = getattr(args, "threads", None)
    if threads is not None:
        if threads < 0:
            print(f"error: --threads tidak boleh negatif, dapat {threads}", file=err)
            return EXIT_USAGE
        state.workers = threads

    try:
        command = build_command(args)
    except DomainError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE

    logger.info("command %s (workers=%d)", args.command, state.workers)
    return run(command, out, err)

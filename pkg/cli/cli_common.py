# cli/cli_common.py
# Format output CLI: baris key=value, 9 digit signifikan.

from __future__ import annotations

from typing import Iterable, TextIO, Tuple

from race.monte_carlo import MonteCarloEstimate


def fmt_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:#.9g}"
    return str(value)


def write_kv(out: TextIO, key: str, value) -> None:
    out.write(f"{key}={fmt_value(value)}\n")


def write_pairs(out: TextIO, pairs: Iterable[Tuple[str, object]]) -> None:
    for key, value in pairs:
        write_kv(out, key, value)


def write_estimate(out: TextIO, key: str, estimate: MonteCarloEstimate) -> None:
    write_kv(out, key, estimate.mean)
    write_kv(out, f"{key}_se", estimate.std_error)

# sweep/emitter.py
# Serialisasi RegionMap: CSV (pandas) atau PPM P6 biner (numpy).

from __future__ import annotations

import io
import logging
from enum import Enum
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from core.errors import DomainError, EmitError
from race.strategies import STRATEGY_ORDER, StrategyKind
from sweep.grid import Q_EPSILON, RegionMap

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["q", "gamma", "best", "score_hm", "score_sm", "score_lsm", "score_efsm"]
CSV_FLOAT_FORMAT = "%.9g"
# trailer per cell: "# sm_se,<q>,<gamma>,<se>" setelah tabel
SM_SE_PREFIX = "# sm_se,"
SM_SE_COLUMNS = ["q", "gamma", "sm_std_error"]

# urutan legend kiri → kanan: HM, SM, LSM, EFSM
PPM_PALETTE = {
    StrategyKind.HONEST: (255, 255, 255),
    StrategyKind.SELFISH: (0, 0, 255),
    StrategyKind.LEAD_STUBBORN: (0, 255, 0),
    StrategyKind.EQUAL_FORK_STUBBORN: (255, 0, 0),
}


class MapFormat(Enum):
    CSV = "csv"
    PPM = "ppm"

    @classmethod
    def from_flag(cls, name: str) -> "MapFormat":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise DomainError(f"format tidak dikenal: {name!r} (pilih: csv | ppm)") from None


def _metadata_lines(region_map: RegionMap, sm_mode_label: str) -> List[str]:
    grid = region_map.grid
    lines = [
        f"# grid q=[{grid.q_min:.9g}, {grid.q_max:.9g}] steps={grid.q_steps}",
        f"# grid gamma=[{grid.gamma_min:.9g}, {grid.gamma_max:.9g}] steps={grid.gamma_steps}",
        f"# q clamped to [{Q_EPSILON:.9g}, {0.5 - Q_EPSILON:.9g}]",
        "# order: row-major, gamma outer; tie-break HM > SM > LSM > EFSM",
        f"# sm_mode: {sm_mode_label}",
    ]
    sm_errors = np.array([c.sm_std_error for c in region_map.cells], dtype=float)
    if np.any(sm_errors > 0):
        lines.append(
            f"# sm_std_error: max={sm_errors.max():.9g} mean={sm_errors.mean():.9g}"
        )
    return lines


def _sm_error_lines(region_map: RegionMap) -> List[str]:
    if not any(c.sm_std_error > 0 for c in region_map.cells):
        return []
    return [
        f"{SM_SE_PREFIX}{c.q:.9g},{c.gamma:.9g},{c.sm_std_error:.9g}"
        for c in region_map.cells
    ]


def map_to_frame(region_map: RegionMap) -> pd.DataFrame:
    rows = []
    for cell in region_map.cells:
        rows.append(
            [cell.q, cell.gamma, cell.best.label]
            + [cell.scores[kind] for kind in STRATEGY_ORDER]
        )
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def emit_csv(region_map: RegionMap, sm_mode_label: str = "skip") -> bytes:
    buf = io.StringIO()
    for line in _metadata_lines(region_map, sm_mode_label):
        buf.write(line + "\n")
    map_to_frame(region_map).to_csv(
        buf, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
    )
    for line in _sm_error_lines(region_map):
        buf.write(line + "\n")
    return buf.getvalue().encode("ascii")


def read_csv(source) -> pd.DataFrame:
    """Baca balik CSV peta (baris metadata '#' dilewati)."""
    return pd.read_csv(source, comment="#")


def read_sm_errors(source: bytes) -> pd.DataFrame:
    """Standard error SM per cell dari trailer CSV (kosong kalau SM tidak disimulasikan)."""
    rows = [
        line[len(SM_SE_PREFIX):]
        for line in source.decode("ascii").splitlines()
        if line.startswith(SM_SE_PREFIX)
    ]
    if not rows:
        return pd.DataFrame(columns=SM_SE_COLUMNS, dtype=float)
    return pd.read_csv(io.StringIO("\n".join(rows)), header=None, names=SM_SE_COLUMNS)


def emit_ppm(region_map: RegionMap) -> bytes:
    """
    Satu pixel per cell; q naik ke kanan, gamma naik ke atas
    (baris pertama gambar = gamma tertinggi).
    """
    grid = region_map.grid
    pixels = np.zeros((grid.gamma_steps, grid.q_steps, 3), dtype=np.uint8)
    for gi, row in enumerate(region_map.best_matrix()):
        for qi, best in enumerate(row):
            pixels[gi, qi] = PPM_PALETTE[best]
    header = f"P6\n{grid.q_steps} {grid.gamma_steps}\n255\n".encode("ascii")
    return header + pixels[::-1].tobytes()


def emit_map(region_map: RegionMap, fmt: MapFormat, sm_mode_label: str = "skip") -> bytes:
    if fmt is MapFormat.CSV:
        return emit_csv(region_map, sm_mode_label)
    return emit_ppm(region_map)


def write_map(
    region_map: RegionMap,
    fmt: MapFormat,
    path: str | Path,
    sm_mode_label: str = "skip",
) -> int:
    """Tulis peta ke file; return jumlah byte. Gagal tulis → EmitError."""
    payload = emit_map(region_map, fmt, sm_mode_label)
    target = Path(path)
    try:
        target.write_bytes(payload)
    except OSError as e:
        raise EmitError(f"gagal menulis {target}: {e}") from e
    logger.info("peta %s ditulis ke %s (%d byte)", fmt.value, target, len(payload))
    return len(payload)

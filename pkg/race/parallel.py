# race/parallel.py
# Map paralel deterministik: hasil selalu urut sesuai item, apa pun jadwal worker.

from __future__ import annotations

import logging
from multiprocessing import Pool
from typing import Callable, List, Sequence, TypeVar

from core.lab_state import resolve_workers

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def deterministic_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    workers: int | None = None,
) -> List[R]:
    """
    fn harus fungsi top-level (pickle-able). Dengan 1 worker dijalankan
    langsung di proses ini.
    """
    n_workers = min(resolve_workers(workers), max(len(items), 1))
    if n_workers <= 1:
        return [fn(item) for item in items]

    logger.debug("deterministic_map: %d item di %d worker", len(items), n_workers)
    with Pool(processes=n_workers) as pool:
        return pool.map(fn, items, chunksize=1)


def tree_reduce(values: Sequence[T], combine: Callable[[T, T], T]) -> T:
    """
    Reduksi pairwise dengan bentuk pohon tetap (hanya tergantung jumlah item),
    supaya jumlah floating-point bit-identik di semua jumlah worker.
    """
    if not values:
        raise ValueError("tree_reduce: tidak ada nilai")
    level = list(values)
    while len(level) > 1:
        nxt = [combine(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]

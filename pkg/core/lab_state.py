# core/lab_state.py
# State global proses: jumlah worker & mode debug.

import os
from dataclasses import dataclass

from config import STUBBORN_LAB_THREADS, STUBBORN_LAB_DEBUG
from core.errors import DomainError


@dataclass
class LabState:
    # 0 = auto (semua CPU)
    workers: int = STUBBORN_LAB_THREADS
    debug: bool = STUBBORN_LAB_DEBUG


state = LabState()


def resolve_workers(workers: int | None = None) -> int:
    """
    Jumlah worker efektif.
    - argumen eksplisit menang atas state
    - 0 berarti auto → os.cpu_count()
    """
    n = state.workers if workers is None else workers
    if n < 0:
        raise DomainError(f"jumlah worker tidak boleh negatif: {n}")
    if n == 0:
        return os.cpu_count() or 1
    return n

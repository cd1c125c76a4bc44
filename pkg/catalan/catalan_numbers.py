# catalan/catalan_numbers.py
# Bilangan Catalan exact, deret pembangkit C(x), dan oracle lattice-path.

from __future__ import annotations

import math
from functools import lru_cache

from core.errors import DomainError

# batas enumerasi oracle (eksponensial)
MAX_ORACLE_N = 14


@lru_cache(maxsize=None)
def _catalan_upto(n: int) -> tuple[int, ...]:
    values = [1]
    for k in range(n):
        # C_{k+1} = C_k * 2(2k+1) / (k+2), selalu habis dibagi
        values.append(values[-1] * 2 * (2 * k + 1) // (k + 2))
    return tuple(values)


def catalan_number(n: int) -> int:
    """
    C_n = (2n)! / (n! (n+1)!) exact (int Python, tanpa overflow).
    Dihitung lewat rekurensi, bukan faktorial.
    """
    if n < 0:
        raise DomainError(f"catalan_number: n harus >= 0, dapat {n}")
    # cache per blok 64 supaya panggilan berurutan tidak mengulang rekurensi
    block = (n // 64 + 1) * 64
    return _catalan_upto(block)[n]


def catalan_series(x: float) -> float:
    """
    C(x) = sum C_n x^n = 2 / (1 + sqrt(1 - 4x)), untuk 0 <= x <= 1/4.

    Bentuk 2/(1+sqrt(1-4x)) dipakai (bukan (1-sqrt(1-4x))/(2x)):
    terdefinisi di x = 0 dan tidak kena cancellation di sekitar 0.
    """
    if not (0.0 <= x <= 0.25):
        raise DomainError(f"catalan_series: x harus di [0, 1/4], dapat {x}")
    return 2.0 / (1.0 + math.sqrt(1.0 - 4.0 * x))


def _count_from(x: int, y: int, target: int) -> int:
    if x == target and y == target:
        return 1

    total = 0
    # langkah kanan
    if x < target:
        nx = x + 1
        if (nx == target and y == target) or nx > y:
            total += _count_from(nx, y, target)
    # langkah atas
    if y < target:
        ny = y + 1
        if (x == target and ny == target) or x > ny:
            total += _count_from(x, ny, target)
    return total


def count_strict_paths_oracle(n: int) -> int:
    """
    Oracle brute-force: hitung semua path monoton (kanan/atas) dari (0,0)
    ke (n+1, n+1) yang titik interiornya tidak pernah menyentuh diagonal.

    Path yang valid selalu tetap di satu sisi diagonal; yang dihitung di sini
    sisi bawah (x > y di setiap titik interior), jadi hasilnya harus = C_n.
    Cabang yang menyentuh diagonal dipangkas, semua path valid tetap dienumerasi.
    """
    if n < 0:
        raise DomainError(f"count_strict_paths_oracle: n harus >= 0, dapat {n}")
    if n > MAX_ORACLE_N:
        raise DomainError(
            f"count_strict_paths_oracle: n={n} terlalu besar (maks {MAX_ORACLE_N})"
        )
    return _count_from(0, 0, n + 1)


def truncated_series(x: float, n_terms: int) -> float:
    """
    Oracle deret terpotong sum_{n<=n_terms} C_n x^n, dievaluasi lewat rasio
    suku (C_{n+1}/C_n = 2(2n+1)/(n+2)) supaya tidak overflow.
    """
    if not (0.0 <= x <= 0.25):
        raise DomainError(f"truncated_series: x harus di [0, 1/4], dapat {x}")
    term = 1.0
    total = 1.0
    for k in range(n_terms):
        term *= 2.0 * (2 * k + 1) / (k + 2) * x
        total += term
        if term == 0.0:
            break
    return total

# mining/race_expectations.py
# Dua hasil pendukung: biased coin (indeks sukses terakhir) & Poisson game.

from __future__ import annotations

import itertools
from typing import Tuple

from core.errors import DomainError

# enumerasi 2^n outcome, dibatasi
MAX_COIN_ORACLE_N = 20


def biased_coin_expected_max_index(n: int, gamma: float) -> float:
    """
    Lempar koin bias n kali (P[omega_i = 1] = gamma, i = 1..n),
    Z = indeks sukses terakhir (0 kalau tidak ada).

    E[Z] = n + 1 - (1 - (1 - gamma)^(n+1)) / gamma.
    gamma = 0 → 0 persis (Z = 0 hampir pasti; nilai limit formula).
    """
    if n < 0:
        raise DomainError(f"biased_coin_expected_max_index: n harus >= 0, dapat {n}")
    if not (0.0 <= gamma <= 1.0):
        raise DomainError(f"biased_coin_expected_max_index: gamma di luar [0, 1]: {gamma}")
    if gamma == 0.0:
        return 0.0
    return n + 1 - (1.0 - (1.0 - gamma) ** (n + 1)) / gamma


def enumerate_biased_coin_oracle(n: int, gamma: float) -> float:
    """
    Oracle: E[Z] lewat enumerasi penuh {0,1}^n berbobot.
    """
    if n < 0 or n > MAX_COIN_ORACLE_N:
        raise DomainError(
            f"enumerate_biased_coin_oracle: butuh 0 <= n <= {MAX_COIN_ORACLE_N}, dapat {n}"
        )
    total = 0.0
    for outcome in itertools.product((0, 1), repeat=n):
        weight = 1.0
        last = 0
        for i, w in enumerate(outcome, start=1):
            if w:
                weight *= gamma
                last = i
            else:
                weight *= 1.0 - gamma
        total += weight * last
    return total


def poisson_game_expectations(alpha: float, alpha_prime: float) -> Tuple[float, float]:
    """
    Race dua proses Poisson (rate alpha honest, alpha' attacker) sampai
    tau = inf{t : N(t) = N'(t) + 1}.

    Return (E[tau], E[N(tau)]) = (1/(alpha - alpha'), alpha/(alpha - alpha')).
    alpha' = 0 diterima (race selesai di blok honest pertama).
    """
    if alpha_prime < 0.0:
        raise DomainError(f"poisson_game_expectations: alpha' harus >= 0, dapat {alpha_prime}")
    if alpha <= alpha_prime:
        raise DomainError(
            f"poisson_game_expectations: butuh alpha > alpha' "
            f"(stopping time tidak integrable), dapat alpha={alpha}, alpha'={alpha_prime}"
        )
    gap = alpha - alpha_prime
    return 1.0 / gap, alpha / gap

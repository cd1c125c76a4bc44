# catalan/catalan_distribution.py
# Distribusi (p,q)-Catalan tipe pertama & kedua: pmf, mean, cdf, sampling.

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Protocol

import numpy as np

from catalan.catalan_numbers import catalan_number
from core.errors import DomainError, SimulationError

# di atas batas ini pmf dihitung lewat lgamma (float(C_n) overflow sekitar n ~ 500)
_EXACT_PMF_LIMIT = 400

# batas walk inverse-CDF
MAX_SAMPLE_WALK = 10**6


class UniformSource(Protocol):
    def uniform(self) -> float: ...


class CatalanKind(Enum):
    FIRST_TYPE = "first"
    SECOND_TYPE = "second"


@dataclass(frozen=True)
class CatalanDistribution:
    """
    Hukum (p,q)-Catalan dengan 1/2 < p < 1, q = 1 - p (turunan, tidak disimpan).

    FIRST_TYPE : P[X=n] = C_n p (pq)^n,   n >= 0
    SECOND_TYPE: P[X=0] = p, P[X=n] = C_{n-1} (pq)^n,   n >= 1
    """

    p: float
    kind: CatalanKind = CatalanKind.FIRST_TYPE

    def __post_init__(self) -> None:
        if not (0.5 < self.p < 1.0):
            # p = 1/2 ditolak di sini: semua mean divergen
            raise DomainError(f"CatalanDistribution: butuh 1/2 < p < 1, dapat p={self.p}")

    @property
    def q(self) -> float:
        return 1.0 - self.p


def _first_type_pmf(p: float, q: float, n: int) -> float:
    pq = p * q
    if n <= _EXACT_PMF_LIMIT:
        return float(catalan_number(n)) * p * pq**n
    log_cn = math.lgamma(2 * n + 1) - math.lgamma(n + 1) - math.lgamma(n + 2)
    return math.exp(log_cn + math.log(p) + n * math.log(pq))


def pmf(dist: CatalanDistribution, n: int) -> float:
    if n < 0:
        return 0.0
    if dist.kind is CatalanKind.FIRST_TYPE:
        return _first_type_pmf(dist.p, dist.q, n)
    if n == 0:
        return dist.p
    # C_{n-1} (pq)^n = q * [C_{n-1} p (pq)^{n-1}]
    return dist.q * _first_type_pmf(dist.p, dist.q, n - 1)


def pmf_table(dist: CatalanDistribution, n_max: int) -> np.ndarray:
    """
    pmf untuk n = 0..n_max sekaligus (rekurensi rasio suku, tanpa bilangan besar).
    """
    if n_max < 0:
        raise DomainError(f"pmf_table: n_max harus >= 0, dapat {n_max}")
    p, q = dist.p, dist.q
    pq = p * q

    k = np.arange(n_max, dtype=float)
    ratios = 2.0 * (2.0 * k + 1.0) / (k + 2.0) * pq
    first = np.empty(n_max + 1, dtype=float)
    first[0] = p
    if n_max > 0:
        first[1:] = p * np.cumprod(ratios)

    if dist.kind is CatalanKind.FIRST_TYPE:
        return first

    second = np.empty(n_max + 1, dtype=float)
    second[0] = p
    second[1:] = q * first[:-1]
    return second


def cdf(dist: CatalanDistribution, n: int) -> float:
    if n < 0:
        return 0.0
    return float(math.fsum(pmf_table(dist, n)))


def mean(dist: CatalanDistribution) -> float:
    """
    FIRST_TYPE  → q / (p - q)
    SECOND_TYPE → pq / (p - q)
    """
    p, q = dist.p, dist.q
    if dist.kind is CatalanKind.FIRST_TYPE:
        return q / (p - q)
    return p * q / (p - q)


def sample(dist: CatalanDistribution, stream: UniformSource) -> int:
    """
    Sampling inverse-CDF: jalan kumulatif pmf sampai melewati u.
    Ekor geometrik (pq <= 1/4) jadi walk pendek; batas 10^6 hanya pengaman.
    """
    u = stream.uniform()
    p, q = dist.p, dist.q
    pq = p * q

    # suku tipe pertama berjalan: first(n) = C_n p (pq)^n
    first = p
    # P[X=0] = p untuk kedua tipe
    acc = p
    n = 0
    while u >= acc:
        if n >= MAX_SAMPLE_WALK:
            raise SimulationError(
                f"sample: walk inverse-CDF melewati {MAX_SAMPLE_WALK} langkah (u={u})"
            )
        if dist.kind is CatalanKind.FIRST_TYPE:
            first *= 2.0 * (2 * n + 1) / (n + 2) * pq
            term = first
        else:
            # second(n+1) = q * first(n)
            term = q * first
            first *= 2.0 * (2 * n + 1) / (n + 2) * pq
        n += 1
        acc += term
    return n


# ===============================
# sampling vektor (kepala tabel + ekor rejection)
# ===============================

# n < _HEAD_SIZE lewat tabel CDF, sisanya lewat rejection
_HEAD_SIZE = 256
MAX_REJECTION_ROUNDS = 10_000
# draw >= 2^53 ditolak: jumlah blok tetap eksak di float & int64
_MAX_TAIL_N = float(2**53)


class UniformBatchSource(Protocol):
    def uniforms(self, size: int) -> np.ndarray: ...


def _stirling_correction(z: np.ndarray) -> np.ndarray:
    # ln Gamma(z + 1) - (z ln z - z + ln(2 pi z) / 2), cukup untuk z >= 256
    return 1.0 / (12.0 * z) - 1.0 / (360.0 * z**3) + 1.0 / (1260.0 * z**5)


def _log_scaled_catalan(n: np.ndarray) -> np.ndarray:
    """ln(C_n / 4^n) untuk n besar, selalu < ln(n^{-3/2} / sqrt(pi))."""
    return (
        -0.5 * np.log(np.pi * n)
        - np.log1p(n)
        + _stirling_correction(2.0 * n)
        - 2.0 * _stirling_correction(n)
    )


def _first_type_tail(p: float, size: int, stream: UniformBatchSource) -> np.ndarray:
    """
    X | X >= n0 untuk tipe pertama. Bobot ekor C_n (pq)^n = (C_n / 4^n) r^n, r = 4pq.

    - n0 (1 - r) >= 1: proposal n0 + Geometric(r), peluang terima C_n 4^-n sqrt(pi) n0^{3/2}
    - hampir tanpa drift: proposal floor(n0 / U^2) dengan ekor n^{-1/2}
    """
    n0 = float(_HEAD_SIZE)
    q = 1.0 - p
    log_r = math.log1p(-((p - q) ** 2))
    geometric = -log_r * n0 >= 1.0
    log_geometric_bound = -0.5 * math.log(math.pi) - 1.5 * math.log(n0)
    log_pareto_bound = math.log(2.0) + 1.5 * math.log1p(1.0 / n0) - 0.5 * math.log(math.pi)

    out = np.empty(size, dtype=np.int64)
    pending = np.arange(size)
    for _ in range(MAX_REJECTION_ROUNDS):
        if pending.size == 0:
            return out
        k = pending.size
        u = 1.0 - stream.uniforms(k)  # (0, 1]
        v = stream.uniforms(k)

        if geometric:
            n = n0 + np.floor(np.log(u) / log_r)
            log_accept = _log_scaled_catalan(n) - log_geometric_bound
        else:
            n = np.floor(n0 / np.square(u))
            n = np.where(n < _MAX_TAIL_N, n, _MAX_TAIL_N)
            # ln(n^{-1/2} - (n+1)^{-1/2}) tanpa cancellation
            log_cell = -0.5 * (np.log(n) + np.log1p(n)) - np.log(np.sqrt(n) + np.sqrt(n + 1.0))
            log_accept = _log_scaled_catalan(n) + n * log_r - log_pareto_bound - log_cell
            log_accept = np.where(n < _MAX_TAIL_N, log_accept, -np.inf)

        accepted = v < np.exp(log_accept)
        out[pending[accepted]] = n[accepted].astype(np.int64)
        pending = pending[~accepted]

    raise SimulationError(
        f"sample_array: rejection ekor belum selesai setelah {MAX_REJECTION_ROUNDS} ronde (p={p})"
    )


def _first_type_array(p: float, size: int, stream: UniformBatchSource) -> np.ndarray:
    head = np.cumsum(pmf_table(CatalanDistribution(p), _HEAD_SIZE - 1))
    out = np.searchsorted(head, stream.uniforms(size), side="right").astype(np.int64)
    tail = np.flatnonzero(out >= _HEAD_SIZE)
    if tail.size:
        out[tail] = _first_type_tail(p, tail.size, stream)
    return out


def sample_array(dist: CatalanDistribution, size: int, stream: UniformBatchSource) -> np.ndarray:
    """
    `size` sampel independen sekaligus, biaya O(1) per sampel juga untuk p dekat 1/2.
    Kepala n < 256 lewat inverse-CDF tabel, ekor lewat rejection yang eksak.
    """
    if size < 0:
        raise DomainError(f"sample_array: size harus >= 0, dapat {size}")
    if dist.kind is CatalanKind.FIRST_TYPE:
        return _first_type_array(dist.p, size, stream)

    # tipe kedua: 0 dengan peluang p, selain itu 1 + tipe pertama
    out = np.zeros(size, dtype=np.int64)
    lead = np.flatnonzero(stream.uniforms(size) >= dist.p)
    if lead.size:
        out[lead] = 1 + _first_type_array(dist.p, lead.size, stream)
    return out

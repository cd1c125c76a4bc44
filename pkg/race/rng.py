# race/rng.py
# Stream random counter-based (Philox) yang reproducible & independen jadwal paralel.
#
# Derivasi stream (stabil antar versi):
#   generator(seed, *key) = Generator(Philox(SeedSequence(seed, spawn_key=key)))
# Monte Carlo memakai key = (batch_index,), sweep memakai (cell_index,) untuk
# seed cell lalu (batch_index,) di dalam cell.

from __future__ import annotations

import math
from typing import Protocol, Sequence

import numpy as np

from core.errors import SimulationError

_BUFFER_SIZE = 1024


class UniformStream(Protocol):
    def uniform(self) -> float: ...

    def uniforms(self, size: int) -> np.ndarray: ...

    def gammas(self, shape: np.ndarray) -> np.ndarray: ...


def derive_generator(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *key: int) -> int:
    """Seed 64-bit turunan, mis. seed per cell di sweep."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


class RandomStream:
    """
    Stream uniform [0, 1) di atas numpy Generator.
    uniform() dan uniforms() membaca satu urutan logis yang sama.
    """

    def __init__(self, generator: np.random.Generator) -> None:
        self._gen = generator
        self._buf = np.empty(0, dtype=float)
        self._pos = 0

    @classmethod
    def from_seed(cls, seed: int, *key: int) -> "RandomStream":
        return cls(derive_generator(seed, *key))

    def uniform(self) -> float:
        if self._pos >= self._buf.size:
            self._buf = self._gen.random(_BUFFER_SIZE)
            self._pos = 0
        value = float(self._buf[self._pos])
        self._pos += 1
        return value

    def uniforms(self, size: int) -> np.ndarray:
        left = self._buf.size - self._pos
        if left <= 0:
            return self._gen.random(size)
        take = min(left, size)
        head = self._buf[self._pos:self._pos + take]
        self._pos += take
        if take == size:
            return head.copy()
        return np.concatenate([head, self._gen.random(size - take)])

    def gammas(self, shape: np.ndarray) -> np.ndarray:
        """Gamma(shape, 1): jumlah `shape` waktu antar-event Exp(1)."""
        return self._gen.standard_gamma(np.asarray(shape, dtype=float))


class ScriptedStream:
    """
    Urutan uniform tetap, untuk memaksa urutan event tertentu (replay / test).
    """

    def __init__(self, values: Sequence[float]) -> None:
        self._values = [float(v) for v in values]
        self._pos = 0

    def uniform(self) -> float:
        if self._pos >= len(self._values):
            raise SimulationError("ScriptedStream habis")
        value = self._values[self._pos]
        self._pos += 1
        return value

    def uniforms(self, size: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(size)], dtype=float)

    def gammas(self, shape: np.ndarray) -> np.ndarray:
        # shape bulat: jumlah Exp(1) dari uniform skrip, satu per event
        return np.array(
            [
                sum(-math.log1p(-self.uniform()) for _ in range(int(k)))
                for k in np.asarray(shape).ravel()
            ],
            dtype=float,
        )

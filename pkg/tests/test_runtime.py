# tests/test_runtime.py
import logging
import os

import numpy as np
import pytest

from core.errors import DomainError, SimulationError
from core.lab_state import resolve_workers, state
from logs.lab_logging import setup_logging
from race.parallel import deterministic_map, tree_reduce
from race.rng import RandomStream, ScriptedStream, derive_seed
from race.strategies import StrategyKind


def _square(x):
    return x * x


def test_resolve_workers(monkeypatch):
    monkeypatch.setattr(state, "workers", 3)
    assert resolve_workers() == 3
    assert resolve_workers(1) == 1
    assert resolve_workers(0) == (os.cpu_count() or 1)
    with pytest.raises(DomainError):
        resolve_workers(-2)


def test_deterministic_map_keeps_order():
    items = list(range(10))
    assert deterministic_map(_square, items, workers=1) == [x * x for x in items]
    assert deterministic_map(_square, items, workers=3) == [x * x for x in items]


def test_tree_reduce_shape_is_fixed():
    calls = []

    def combine(a, b):
        calls.append((a, b))
        return a + b

    assert tree_reduce([1, 2, 3, 4, 5], combine) == 15
    assert calls == [(1, 2), (3, 4), (3, 7), (10, 5)]
    with pytest.raises(ValueError):
        tree_reduce([], combine)


def test_random_stream_single_and_bulk_reads_share_sequence():
    a = RandomStream.from_seed(42, 1)
    b = RandomStream.from_seed(42, 1)
    singles = [a.uniform() for _ in range(5)]
    bulk = list(b.uniforms(5))
    assert singles == bulk
    mixed = RandomStream.from_seed(42, 1)
    assert [mixed.uniform(), *mixed.uniforms(4)] == singles


def test_streams_differ_by_key():
    a = RandomStream.from_seed(42, 0).uniforms(4)
    b = RandomStream.from_seed(42, 1).uniforms(4)
    assert not np.array_equal(a, b)
    assert derive_seed(42, 0) == derive_seed(42, 0)
    assert derive_seed(42, 0) != derive_seed(42, 1)


def test_scripted_stream():
    stream = ScriptedStream([0.25, 0.5])
    assert list(stream.uniforms(2)) == [0.25, 0.5]
    with pytest.raises(SimulationError):
        stream.uniform()


def test_gamma_draws():
    # skrip: satu uniform per event, 0.5 → ln 2
    scripted = ScriptedStream([0.5] * 5)
    assert np.allclose(scripted.gammas(np.array([2, 3])), [2 * np.log(2), 3 * np.log(2)])

    draws = RandomStream.from_seed(3, 0).gammas(np.full(100_000, 4))
    assert abs(draws.mean() - 4.0) <= 5 * 2.0 / np.sqrt(draws.size)


def test_strategy_flags():
    assert StrategyKind.from_flag("LSM") is StrategyKind.LEAD_STUBBORN
    assert StrategyKind.EQUAL_FORK_STUBBORN.label == "EFSM"
    with pytest.raises(DomainError):
        StrategyKind.from_flag("tsm")


def test_setup_logging_is_idempotent():
    setup_logging("INFO")
    setup_logging("DEBUG")
    root = logging.getLogger()
    tagged = [h for h in root.handlers if getattr(h, "_stubborn_lab", False)]
    assert len(tagged) == 1
    assert root.level == logging.DEBUG
    setup_logging("WARNING")

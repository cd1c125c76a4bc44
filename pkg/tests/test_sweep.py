# tests/test_sweep.py
import io

import numpy as np
import pytest

from core.errors import DomainError, EmitError
from mining.mining_params import MiningParams
from race.strategies import STRATEGY_ORDER
from sweep.classifier import (
    SmMode,
    classify_cell,
    compute_map,
    frontier_violations,
    ordering_reversals,
    pick_best,
)
from sweep.emitter import (
    CSV_COLUMNS,
    PPM_PALETTE,
    MapFormat,
    emit_csv,
    emit_map,
    emit_ppm,
    read_csv,
    read_sm_errors,
    write_map,
)
from sweep.grid import Q_EPSILON, CellResult, GridSpec, RegionMap

HM, SM, LSM, EFSM = STRATEGY_ORDER


# ===============================
# grid
# ===============================

def test_grid_defaults_clamp_q():
    grid = GridSpec(q_steps=3, gamma_steps=2)
    qs = grid.q_values()
    assert qs[0] == pytest.approx(Q_EPSILON)
    assert qs[-1] == pytest.approx(0.5 - Q_EPSILON)
    assert list(grid.gamma_values()) == [0.0, 1.0]


def test_grid_cells_are_gamma_outer():
    grid = GridSpec(q_min=0.1, q_max=0.2, gamma_min=0.0, gamma_max=1.0, q_steps=2, gamma_steps=2)
    cells = grid.cells()
    assert [c[0] for c in cells] == [0, 1, 2, 3]
    assert [(c[1], c[2]) for c in cells] == [(0.1, 0.0), (0.2, 0.0), (0.1, 1.0), (0.2, 1.0)]


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(q_steps=0),
        dict(q_min=0.3, q_max=0.2),
        dict(q_max=0.5),
        dict(gamma_min=0.5, gamma_max=0.4),
        dict(gamma_max=1.1),
    ],
)
def test_grid_rejects_invalid(kwargs):
    with pytest.raises(DomainError):
        GridSpec(**kwargs)


def test_region_map_requires_all_cells():
    with pytest.raises(DomainError):
        RegionMap(grid=GridSpec(q_steps=2, gamma_steps=2), cells=[])


# ===============================
# classify_cell
# ===============================

def test_classify_small_attacker_is_honest():
    best, _ = classify_cell(MiningParams(q=0.05, gamma=0.1))
    assert best is HM


def test_classify_large_attacker_high_gamma_is_efsm():
    best, _ = classify_cell(MiningParams(q=0.45, gamma=0.95))
    assert best is EFSM


def test_classify_gamma_one():
    best, scores = classify_cell(MiningParams(q=0.4, gamma=1.0))
    assert best is EFSM
    assert scores[EFSM] == pytest.approx(0.4 / 0.6)
    assert scores[LSM] == pytest.approx(0.4 * 0.68 / 0.44)
    assert scores[HM] == 0.4
    assert scores[SM] == 0.0


def test_classify_gamma_zero_uses_limit_mode():
    best, scores = classify_cell(MiningParams(q=0.3, gamma=0.0))
    assert best is HM
    assert scores[EFSM] == 0.0
    assert 0.0 < scores[LSM] < 0.3


def test_classify_uses_sm_score():
    best, scores = classify_cell(MiningParams(q=0.3, gamma=0.5), 0.9)
    assert best is SM
    assert scores[SM] == 0.9


def test_tie_break_prefers_least_deviant():
    assert pick_best({HM: 0.3, SM: 0.3, LSM: 0.3, EFSM: 0.3}) is HM
    assert pick_best({HM: 0.1, SM: 0.2, LSM: 0.4, EFSM: 0.4}) is LSM


def test_classify_invariant_under_unit_rescaling():
    base = classify_cell(MiningParams(q=0.35, gamma=0.7))
    scaled = classify_cell(MiningParams(q=0.35, gamma=0.7, block_reward=12.5, tau0=1200.0))
    assert base[0] is scaled[0]
    for kind in STRATEGY_ORDER:
        assert scaled[1][kind] == pytest.approx(base[1][kind])


# ===============================
# compute_map
# ===============================

def test_three_strategy_map():
    grid = GridSpec(q_steps=11, gamma_steps=11)
    region_map = compute_map(grid, SmMode.skip())
    assert {c.best for c in region_map.cells} <= {HM, LSM, EFSM}
    # baris gamma = 1: EFSM untuk semua q > 0 (kolom q = 1e-6 seri di presisi float)
    top = region_map.best_matrix()[-1]
    assert all(best is EFSM for best in top[1:])
    assert all(0.0 <= s <= 1.0 for c in region_map.cells for s in c.scores.values())


def test_single_cell_map_equals_classify_cell():
    grid = GridSpec(q_min=0.3, q_max=0.3, gamma_min=0.5, gamma_max=0.5, q_steps=1, gamma_steps=1)
    region_map = compute_map(grid, SmMode.skip())
    best, scores = classify_cell(MiningParams(q=0.3, gamma=0.5))
    assert len(region_map.cells) == 1
    assert region_map.cells[0].best is best
    assert region_map.cells[0].scores == scores


def test_analytic_map_regions_and_frontier():
    region_map = compute_map(GridSpec(q_steps=101, gamma_steps=101), SmMode.skip())
    counts = region_map.region_counts()
    assert counts[HM] > 0
    assert counts[LSM] > 0
    assert counts[EFSM] > 0
    assert counts[SM] == 0
    assert frontier_violations(region_map) == []

    # baris gamma = 0.9: HM → LSM → EFSM tanpa mundur
    row = region_map.best_matrix()[90]
    ranks = [STRATEGY_ORDER.index(best) for best in row]
    assert ranks == sorted(ranks)
    assert ordering_reversals(region_map, 90) == []


def test_simulated_map_is_deterministic():
    grid = GridSpec(q_min=0.1, q_max=0.45, gamma_min=0.0, gamma_max=1.0, q_steps=4, gamma_steps=3)
    mode = SmMode.simulated(2000, seed=5)
    a = emit_csv(compute_map(grid, mode, workers=1), mode.label)
    b = emit_csv(compute_map(grid, mode, workers=1), mode.label)
    c = emit_csv(compute_map(grid, mode, workers=2), mode.label)
    assert a == b == c
    assert b"# sm_std_error" in a


def test_simulated_map_sm_cells_carry_error():
    grid = GridSpec(q_min=0.3, q_max=0.3, gamma_min=0.5, gamma_max=0.5, q_steps=1, gamma_steps=1)
    cell = compute_map(grid, SmMode.simulated(5000, seed=1)).cells[0]
    assert cell.sm_std_error > 0
    assert 0.0 < cell.scores[SM] < 1.0


def test_simulated_map_reaches_half():
    # kolom q teratas grid default: race SM hampir tanpa drift
    grid = GridSpec(q_min=0.45, gamma_min=0.5, gamma_max=0.9, q_steps=2, gamma_steps=2)
    region_map = compute_map(grid, SmMode.simulated(20_000, seed=42))
    for cell in region_map.cells:
        assert 0.0 < cell.scores[SM] <= 1.0
        assert cell.sm_std_error > 0


def _row_map(bests, sm_scores, sm_error):
    grid = GridSpec(q_min=0.1, q_max=0.3, gamma_min=0.5, gamma_max=0.5, q_steps=3, gamma_steps=1)
    cells = [
        CellResult(
            q=q, gamma=0.5, best=best,
            scores={HM: 0.3, SM: sm, LSM: 0.0, EFSM: 0.0},
            sm_std_error=sm_error,
        )
        for q, best, sm in zip(grid.q_values(), bests, sm_scores)
    ]
    return RegionMap(grid=grid, cells=cells)


def test_ordering_reversals_ignore_sm_noise():
    noisy = _row_map([HM, SM, HM], [0.2, 0.31, 0.29], sm_error=0.01)
    assert ordering_reversals(noisy, 0) == []


def test_ordering_reversals_flag_resolved_flip():
    flipped = _row_map([HM, SM, HM], [0.2, 0.35, 0.2], sm_error=0.001)
    assert ordering_reversals(flipped, 0) == [(1, 2)]


@pytest.mark.slow
def test_simulated_map_fast_mode():
    grid = GridSpec(q_steps=31, gamma_steps=31)
    region_map = compute_map(grid, SmMode.simulated(100_000, seed=42))
    counts = region_map.region_counts()
    assert all(counts[kind] > 0 for kind in STRATEGY_ORDER), counts
    assert counts[LSM] < 0.05 * grid.size

    # baris gamma = 0.9: HM → SM → LSM → EFSM tanpa mundur di luar noise SM
    row = int(np.argmin(np.abs(grid.gamma_values() - 0.9)))
    assert ordering_reversals(region_map, row) == []


# ===============================
# emitter
# ===============================

@pytest.fixture
def small_map():
    grid = GridSpec(q_min=0.1, q_max=0.45, gamma_min=0.0, gamma_max=1.0, q_steps=2, gamma_steps=2)
    return compute_map(grid, SmMode.skip())


def test_csv_layout(small_map):
    text = emit_csv(small_map).decode("ascii")
    lines = text.splitlines()
    data = [line for line in lines if not line.startswith("#")]
    assert data[0] == ",".join(CSV_COLUMNS)
    assert len(data) == 1 + 4
    assert any("clamped" in line for line in lines if line.startswith("#"))


def test_csv_round_trip(small_map):
    frame = read_csv(io.BytesIO(emit_csv(small_map)))
    assert list(frame.columns) == CSV_COLUMNS
    assert list(frame["best"]) == [c.best.label for c in small_map.cells]
    for column, kind in zip(CSV_COLUMNS[3:], STRATEGY_ORDER):
        expected = [c.scores[kind] for c in small_map.cells]
        assert np.allclose(frame[column].to_numpy(), expected, rtol=1e-8, atol=0)


def test_csv_without_simulation_has_no_sm_errors(small_map):
    payload = emit_csv(small_map)
    assert b"# sm_se," not in payload
    assert read_sm_errors(payload).empty


def test_csv_carries_sm_error_per_cell():
    grid = GridSpec(q_min=0.2, q_max=0.4, gamma_min=0.0, gamma_max=1.0, q_steps=2, gamma_steps=2)
    region_map = compute_map(grid, SmMode.simulated(2000, seed=3), workers=1)
    payload = emit_csv(region_map, "simulated")

    errors = read_sm_errors(payload)
    assert list(errors.columns) == ["q", "gamma", "sm_std_error"]
    assert len(errors) == grid.size
    expected = [c.sm_std_error for c in region_map.cells]
    assert np.allclose(errors["sm_std_error"].to_numpy(), expected, rtol=1e-8, atol=0)
    assert np.allclose(errors["q"].to_numpy(), [c.q for c in region_map.cells])
    assert (errors["sm_std_error"] > 0).all()

    # trailer tidak mengganggu tabel utama
    assert len(read_csv(io.BytesIO(payload))) == grid.size


def test_ppm_layout(small_map):
    payload = emit_ppm(small_map)
    header = b"P6\n2 2\n255\n"
    assert payload.startswith(header)
    assert len(payload) == len(header) + 3 * 2 * 2

    pixels = np.frombuffer(payload[len(header):], dtype=np.uint8).reshape(2, 2, 3)
    # baris atas = gamma tertinggi, kolom kanan = q tertinggi
    assert tuple(pixels[0, 1]) == PPM_PALETTE[small_map.cell(1, 1).best]
    assert tuple(pixels[1, 0]) == PPM_PALETTE[small_map.cell(0, 0).best]
    assert tuple(pixels[1, 0]) == PPM_PALETTE[HM]
    assert tuple(pixels[0, 1]) == PPM_PALETTE[EFSM]


def test_emit_map_dispatch(small_map):
    assert emit_map(small_map, MapFormat.PPM).startswith(b"P6")
    assert emit_map(small_map, MapFormat.CSV).startswith(b"#")


def test_write_map(tmp_path, small_map):
    target = tmp_path / "map.csv"
    n = write_map(small_map, MapFormat.CSV, target)
    assert target.read_bytes() == emit_csv(small_map)
    assert n == target.stat().st_size


def test_write_map_failure_raises_emit_error(tmp_path, small_map):
    with pytest.raises(EmitError):
        write_map(small_map, MapFormat.PPM, tmp_path / "missing" / "map.ppm")


def test_map_format_flag():
    assert MapFormat.from_flag("CSV") is MapFormat.CSV
    with pytest.raises(DomainError):
        MapFormat.from_flag("png")

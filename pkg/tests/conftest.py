# tests/conftest.py
import pytest

from core.lab_state import state


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="jalankan test slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="butuh --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    # default test: satu proses; test paralel set workers eksplisit
    monkeypatch.setattr(state, "workers", 1)

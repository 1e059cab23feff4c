"""
Спільні налаштування тестів: src у шляху імпорту, маркер slow, типові пристрої
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from core.llg_core import DeviceParams, SimConfig  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="Запускати тривалі тести Монте-Карло")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: тривалий тест Монте-Карло (потребує --run-slow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="потрібен --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def default_params():
    """Типовий пристрій (K_eff близька до нуля, мале поле анізотропії)"""
    return DeviceParams()


@pytest.fixture
def strong_pma():
    """Пристрій з сильною PMA: M_s = 0.8e6 А/м, стабільність близько 264 kT"""
    return DeviceParams(M_s=0.8e6)


@pytest.fixture
def sim():
    return SimConfig(dt=1e-12, seed=0)


@pytest.fixture
def run_root(tmp_path, monkeypatch):
    """Окрема коренева тека запусків для тестів CLI"""
    root = tmp_path / "runs"
    monkeypatch.setenv("MTJ_CODESIGN_OUTPUT", str(root))
    return root

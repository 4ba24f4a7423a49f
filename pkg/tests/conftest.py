"""common fixtures for use by all test classes"""

import os

import pytest

import accsim
import accsim.presets
import accsim.registry
from accsim.metrics import load_coefficients
from accsim.simulation import simulate

TESTS_DIR = os.path.dirname(__file__)


@pytest.fixture(scope="module")
def app():
    app = accsim.create_app(config_name="accsim.default_config.TestingConfig")
    return app


@pytest.fixture(scope="module")
def app_no_scenarios():
    return accsim.create_app(
        config_name="accsim.default_config.TestingNoScenariosConfig"
    )


@pytest.fixture(scope="module")
def registry(app):
    with app.app_context():
        return accsim.registry.get_registry()


@pytest.fixture
def accsim_caplog(caplog, monkeypatch):
    """caplog that also sees the accsim logger, which stops propagating once
    the CLI module has configured it"""
    monkeypatch.setattr(accsim.logger, "propagate", True)
    return caplog


@pytest.fixture(scope="session")
def coefficients():
    return load_coefficients()


@pytest.fixture(scope="session")
def preset_trajectories():
    """Full ten vehicle runs of the baseline and the six attack cases,
    shared by the simulation and metrics tests"""
    names = ["baseline"] + [f"case{i}" for i in range(1, 7)]
    return {
        name: simulate(accsim.presets.get_preset(name).scenario) for name in names
    }


@pytest.fixture(scope="module")
def scenario_dir():
    return os.path.join(TESTS_DIR, "scenarios.d")


@pytest.fixture(scope="module")
def configs_dir():
    return os.path.join(TESTS_DIR, "configs")

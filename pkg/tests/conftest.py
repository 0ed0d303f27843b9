# tests/conftest.py

import json
import os
import sys

import numpy as np
import pytest
from dotenv import load_dotenv

# Add project root to path to ensure imports work
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from qbattery import create_runner
from qbattery.core.config import Settings
from qbattery.models import InitialState, SystemParams, TimeGrid

OPTICAL_OMEGA0 = 1.5e9
DECOUPLED_D = np.sqrt(0.9)


@pytest.fixture(autouse=True)
def load_test_env():
    """Load test environment variables for all tests"""
    load_dotenv("tests/test.env")


def decoupled_amplitude(t):
    """Exact c1(t) for the exponential kernel 0.025 exp(-tau) with D = 0 and c1(0) = 1"""
    t = np.asarray(t, dtype=float)
    d = DECOUPLED_D
    return np.exp(-t / 2) * (np.cosh(d * t / 2) + np.sinh(d * t / 2) / d)


@pytest.fixture
def analytic_c1():
    return decoupled_amplitude


@pytest.fixture
def markovian_params():
    """Markovian resting battery: gamma = 0.1, D = 0.3, beta = 0"""
    return SystemParams(
        omega0=OPTICAL_OMEGA0, gamma=0.1, d_coupling=0.3, delta=0.0, beta=0.0
    )


@pytest.fixture
def decoupled_params():
    """beta = 0, Delta = 0, D = 0, gamma = 0.1; the analytically solvable case"""
    return SystemParams(
        omega0=OPTICAL_OMEGA0, gamma=0.1, d_coupling=0.0, delta=0.0, beta=0.0
    )


@pytest.fixture
def charger_full():
    """Charger excited, battery empty"""
    return InitialState(c1_0=1.0, c2_0=0.0)


@pytest.fixture
def short_grid():
    return TimeGrid(t_max=2.0, n_steps=400)


@pytest.fixture
def test_settings():
    """Settings independent of the developer's environment"""
    return Settings(_env_file=None, THREADS=2, LOG_LEVEL="WARNING")


@pytest.fixture
def runner(test_settings):
    return create_runner(test_settings)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document into tmp_path and return its path."""

    def _write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def small_config():
    """A quick closed-form run: two lambda-times at h = 0.01"""
    return {
        "omega0_over_lambda": OPTICAL_OMEGA0,
        "gamma_over_lambda": 0.1,
        "D_over_lambda": 0.3,
        "Delta_over_lambda": 0.0,
        "beta": 5e-10,
        "kernel_mode": "consistent",
        "solution_mode": "two_branch",
        "c1_0": {"re": 1.0, "im": 0.0},
        "c2_0": {"re": 0.0, "im": 0.0},
        "t_max_lambda": 2.0,
        "n_steps": 200,
    }

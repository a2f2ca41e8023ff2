"""
Shared fixtures for the parallel robot control tests
"""
import numpy as np
import pytest

from app.models.cdr4 import cdr4_model
from app.models.rpr2 import rpr2_model
from app.schemas.scenario import Scenario
from app.services.trajectory_service import trajectory_service


@pytest.fixture
def rpr2():
    return rpr2_model()


@pytest.fixture
def cdr4():
    return cdr4_model()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def rpr_scenario(**overrides) -> Scenario:
    """Short 2-RPR circle scenario; keys of overrides replace top-level fields"""
    data = {
        "name": "rpr_short",
        "controller": "adaptive",
        "robot": {"kind": "rpr2"},
        "perturbation_pct": 0.25,
        "bound_pct": 0.30,
        "gains": {"gamma": 2.0, "k": 3.0, "lambda": 5.0},
        "trajectory": {"kind": "circle", "center": [0.5, 0.7], "radius": 0.1, "period": 5.0},
        "x0": [0.42, 0.68],
        "duration": 0.2,
        "dt": 1e-3,
        "seed": 3,
    }
    data.update(overrides)
    return Scenario.model_validate(data)


def cdr_scenario(**overrides) -> Scenario:
    data = {
        "name": "cdr_short",
        "controller": "adaptive",
        "robot": {"kind": "cdr4"},
        "perturbation_pct": 0.10,
        "bound_pct": 0.15,
        "gains": {"gamma": 20.0, "k": 10.0, "lambda": 5.0},
        "trajectory": {
            "kind": "spiral", "center": [0.48, -0.22, 1.5], "radius": 0.1,
            "period": 5.0, "vertical_rate": 0.0075,
        },
        "x0": [0.43, -0.28, 1.5],
        "duration": 0.1,
        "dt": 1e-3,
        "seed": 0,
    }
    data.update(overrides)
    return Scenario.model_validate(data)


def on_path(scenario_factory, **overrides) -> Scenario:
    """Scenario starting exactly on its desired trajectory"""
    sc = scenario_factory(**overrides)
    xd, vd, _ = trajectory_service.desired_trajectory(sc.trajectory, 0.0)
    return sc.model_copy(update={"x0": xd.tolist(), "v0": vd.tolist()})


@pytest.fixture
def make_rpr_scenario():
    return rpr_scenario


@pytest.fixture
def make_cdr_scenario():
    return cdr_scenario


@pytest.fixture
def make_on_path():
    return on_path

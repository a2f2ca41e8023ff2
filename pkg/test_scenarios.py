#!/usr/bin/env python3
"""
Tests for scenario files: bundled defaults, parsing and diagnostics
"""
import pytest

from app.core.exceptions import ScenarioConfigError
from app.schemas.scenario import ControllerKind, LambdaScaling, Scenario
from app.services.scenario_service import scenario_service


def test_bundled_scenarios_load():
    """Both bundled scenarios validate and carry their reference settings"""
    assert scenario_service.list_bundled() == ["cdr_experiment", "rpr_sim"]
    cdr = scenario_service.load_scenario(scenario_service.bundled_path("cdr_experiment"))
    assert cdr.robot.kind == "cdr4"
    assert cdr.perturbation_pct == 0.10 and cdr.bound_pct == 0.15
    assert cdr.trajectory.center == [0.48, -0.22, 1.5]
    assert cdr.steps == 60000
    assert cdr.gains.lambda_scaling == LambdaScaling.NOMINAL
    rpr = scenario_service.load_scenario(scenario_service.bundled_path("rpr_sim"))
    assert rpr.robot.params.legs_identical()
    assert rpr.controller == ControllerKind.ADAPTIVE


def test_unknown_bundled_scenario():
    with pytest.raises(ScenarioConfigError):
        scenario_service.bundled_path("nope")


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioConfigError, match="not found"):
        scenario_service.load_scenario(tmp_path / "absent.yaml")


def test_yaml_syntax_error_reports_position():
    with pytest.raises(ScenarioConfigError, match="YAML syntax error at line"):
        scenario_service.parse_scenario("name: x\nrobot: [unclosed\n", "broken.yaml")


def test_schema_errors_are_listed(make_rpr_scenario):
    """Every invalid field shows up in the diagnostics"""
    text = scenario_service.dump_scenario(make_rpr_scenario()).replace("dt: 0.001", "dt: -1.0")
    with pytest.raises(ScenarioConfigError) as info:
        scenario_service.parse_scenario(text, "bad.yaml")
    assert any(d.startswith("dt:") for d in info.value.diagnostics)
    assert "dt:" in str(info.value)


def test_scenario_must_be_mapping():
    with pytest.raises(ScenarioConfigError, match="mapping"):
        scenario_service.parse_scenario("- 1\n- 2\n")


def test_dump_and_parse_agree(make_cdr_scenario):
    sc = make_cdr_scenario()
    assert scenario_service.parse_scenario(scenario_service.dump_scenario(sc)) == sc


def test_name_defaults_to_file_stem(make_rpr_scenario):
    text = scenario_service.dump_scenario(make_rpr_scenario()).replace("name: rpr_short\n", "")
    assert scenario_service.parse_scenario(text, "runs/my_case.yaml").name == "my_case"


@pytest.mark.parametrize("overrides", [
    {"perturbation_pct": 0.3, "bound_pct": 0.3},
    {"bound_pct": 1.2},
    {"x0": [0.4, 0.7, 1.0]},
    {"duration": 0.0001},
    {"noise_std": -0.1},
    {"gains": {"gamma": 2.0, "k": -3.0, "lambda": 5.0}},
    {"gains": {"gamma": 2.0, "k": 3.0, "lambda": [1.0, 2.0]}},
    {"trajectory": {"kind": "spiral", "center": [0.5, 0.7], "radius": 0.1}},
])
def test_invalid_scenarios(make_rpr_scenario, overrides):
    with pytest.raises(ValueError):
        make_rpr_scenario(**overrides)


def test_gain_matrices(make_rpr_scenario):
    sc = make_rpr_scenario(gains={"gamma": [1.0, 2.0], "k": 3.0, "lambda": [5.0, 1.0, 1.0, 2.0]})
    assert sc.gains.gamma_matrix(2).tolist() == [[1.0, 0.0], [0.0, 2.0]]
    assert sc.gains.k_matrix(2).tolist() == [[3.0, 0.0], [0.0, 3.0]]
    assert sc.gains.lambda_blocks() == [5.0, 1.0, 1.0, 2.0]
    with pytest.raises(ValueError):
        sc.gains.gamma_matrix(3)


def test_scenario_from_dict_uses_alias():
    sc = Scenario.model_validate({
        "name": "hold",
        "robot": {"kind": "rpr2"},
        "gains": {"gamma": 1.0, "k": 1.0, "lambda": 1.0},
        "trajectory": {"kind": "hold", "center": [0.5, 0.5]},
        "x0": [0.5, 0.5],
        "duration": 1.0,
    })
    assert sc.gains.lambda_ == 1.0
    assert sc.bound_pct == 0.15

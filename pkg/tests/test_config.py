"""Unit tests for scenario configuration handling in accsim"""

import os.path

import pytest

import accsim.presets
from accsim.config import (
    config_from_dict,
    dump_config,
    load_config,
    read_file,
    scenario_files,
)
from accsim.exception import ConfigurationException
from accsim.scenario import Hdv


def minimal(**settings):
    data = {"vehicles": [{"kind": "leader"}, {"kind": "acc"}, {"kind": "hdv"}]}
    data.update(settings)
    return data


@pytest.mark.parametrize("name", sorted(accsim.presets.PRESETS))
def test_dump_and_load_presets(tmpdir, name):
    cfg = accsim.presets.get_preset(name)
    path = tmpdir.join(f"{name}.json")
    path.write(dump_config(cfg))
    loaded = load_config(str(path))
    assert loaded == cfg
    assert dump_config(loaded) == dump_config(cfg)


def test_dump_config_layout():
    text = dump_config(accsim.presets.get_preset("case2"))
    assert text.endswith("}\n")
    assert text.startswith('{\n  "name": "case2",\n  "preset": "case2",')


def test_load_toml(scenario_dir):
    cfg = load_config(os.path.join(scenario_dir, "short-baseline.toml"))
    assert cfg.name == "short-baseline"
    assert cfg.scenario.t_end == 20.0
    hdv = cfg.scenario.vehicle(3)
    assert isinstance(hdv, Hdv)
    assert hdv.params.T == 1.5
    assert cfg.scenario.attacked_vehicles() == []


def test_load_json(scenario_dir):
    cfg = load_config(os.path.join(scenario_dir, "short-case2.json"))
    assert cfg.name == "short-case2"
    assert cfg.scenario.dt == 0.05
    atk = cfg.scenario.vehicle(2).attack
    assert (atk.t_on, atk.t_off) == (5.0, 10.0)
    assert cfg.domain.grid_points == 201


def test_name_defaults_to_file_name(tmpdir):
    cfg = config_from_dict(minimal(), source=str(tmpdir.join("my-run.json")))
    assert cfg.name == "my-run"


def test_all_schema_errors_listed(configs_dir):
    with pytest.raises(ConfigurationException) as excinfo:
        load_config(os.path.join(configs_dir, "invalid-keys.json"))
    message = excinfo.value.message
    assert "invalid-keys.json is not a valid scenario" in message
    assert "'horizon' was unexpected" in message
    # the leader carries an attack, reported with the offending value
    assert "vehicles/0" in message
    assert "does not allow {'g1': 's', 'g2': 'dv'}" in message
    assert "vehicles/1/params/k1" in message
    assert "'gain' was unexpected" in message
    assert len(message.splitlines()) == 5


def test_semantic_errors_listed_together(configs_dir):
    with pytest.raises(ConfigurationException) as excinfo:
        load_config(os.path.join(configs_dir, "semantic-errors.json"))
    message = excinfo.value.message
    assert "exceeds the horizon" in message
    assert "metrics/asv_window [10.0, 90.0] is outside the horizon" in message


def test_bad_expression(configs_dir):
    with pytest.raises(ConfigurationException) as excinfo:
        load_config(os.path.join(configs_dir, "bad-expression.json"))
    message = excinfo.value.message
    assert "vehicles/1: Invalid attack expression" in message
    assert "unknown identifier 'tan'" in message


def test_bad_json_syntax(configs_dir):
    with pytest.raises(ConfigurationException) as excinfo:
        read_file(os.path.join(configs_dir, "bad-syntax.json"))
    assert "Parsing JSON file" in excinfo.value.message
    assert "line 4" in excinfo.value.message


def test_bad_toml_syntax(configs_dir):
    with pytest.raises(ConfigurationException) as excinfo:
        read_file(os.path.join(configs_dir, "bad-syntax.toml"))
    assert "Parsing TOML file" in excinfo.value.message


def test_missing_file(tmpdir):
    with pytest.raises(ConfigurationException) as excinfo:
        load_config(str(tmpdir.join("nothing.json")))
    assert "cannot read scenario file" in excinfo.value.message


def test_attack_window_reversed():
    data = minimal()
    data["vehicles"][1]["attack"] = {
        "g1": "-0.5*s",
        "g2": "-0.5*dv",
        "window": [80.0, 50.0],
    }
    with pytest.raises(ConfigurationException) as excinfo:
        config_from_dict(data)
    assert "vehicles/1" in excinfo.value.message


def test_attack_only_on_acc():
    data = minimal()
    data["vehicles"][2]["attack"] = {"g1": "-0.5*s", "g2": "-0.5*dv"}
    with pytest.raises(ConfigurationException) as excinfo:
        config_from_dict(data)
    message = excinfo.value.message
    assert "vehicles/2" in message
    assert "does not allow {'g1': '-0.5*s', 'g2': '-0.5*dv'}" in message


def test_metrics_settings():
    cfg = config_from_dict(
        minimal(metrics={"asv_window": [60, 120], "fuel_window": [50, 80], "last": 3})
    )
    assert cfg.metrics.asv_window == (60.0, 120.0)
    assert cfg.metrics.fuel_window == (50.0, 80.0)
    assert cfg.metrics.last == 3


def test_metrics_vehicle_range_checked():
    with pytest.raises(ConfigurationException) as excinfo:
        config_from_dict(minimal(metrics={"last": 5}))
    assert "vehicle range 2..5" in excinfo.value.message


def test_asv_window_falls_back_for_short_horizon():
    cfg = config_from_dict(minimal(t_end=20.0))
    assert cfg.metrics.asv_window == (0.0, 20.0)


def test_invalid_domain():
    with pytest.raises(ConfigurationException) as excinfo:
        config_from_dict(minimal(domain={"grid_points": 10}))
    assert "domain: grid_points" in excinfo.value.message


def test_output_settings():
    assert config_from_dict(minimal(output={"svg": True})).svg is True
    assert config_from_dict(minimal()).svg is None


def test_with_dt():
    cfg = accsim.presets.get_preset("case2")
    assert cfg.with_dt(0.025).scenario.n_steps == 8000
    with pytest.raises(ConfigurationException) as excinfo:
        cfg.with_dt(0.3)
    assert excinfo.value.message.startswith("--dt 0.3")


def test_scenario_files(scenario_dir):
    files = scenario_files(scenario_dir)
    assert sorted(files) == ["short-baseline", "short-case2", "short-case4"]
    assert files["short-baseline"].endswith(".toml")


def test_scenario_files_duplicate_names(tmpdir):
    tmpdir.join("same.json").write("{}")
    tmpdir.join("same.toml").write("")
    with pytest.raises(ConfigurationException) as excinfo:
        scenario_files(str(tmpdir))
    assert 'scenario "same" already exists' in excinfo.value.message


def test_v_star_without_equilibrium():
    with pytest.raises(ConfigurationException) as excinfo:
        config_from_dict(minimal(v_star=30.0, t_end=10.0))
    assert "vehicle 3: no IDM equilibrium spacing at speed 30.0" in (
        excinfo.value.message
    )

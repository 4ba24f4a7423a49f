"""Unit test module for accsim CLI commands"""

import json
import os.path

import pytest
from click.testing import CliRunner

import accsim.cli
import accsim.cli_util
import accsim.presets
from accsim.config import dump_config

ENV = {"ACCSIM_CONFIG": "accsim.default_config.TestingConfig"}

runner = CliRunner(env=ENV)

OVERFLOW = {
    "name": "overflow",
    "t_end": 20.0,
    "vehicles": [
        {"kind": "leader"},
        {"kind": "acc", "attack": {"g1": "s^300", "g2": "0", "window": [5, 10]}},
        {"kind": "hdv"},
    ],
    "domain": {"grid_points": 201},
}


def overflow_file(tmpdir):
    path = tmpdir.join("overflow.json")
    path.write(json.dumps(OVERFLOW))
    return str(path)


def test_presets():
    result = runner.invoke(accsim.cli.cli, ["presets"])
    assert not result.exception
    assert result.exit_code == 0
    assert result.output.startswith("Scenario")
    for name in accsim.presets.PRESETS:
        assert name in result.output
    # scenario files from the scenarios directory
    assert "short-case2" in result.output
    assert "short-baseline.toml" in result.output


def test_presets_scenarios_option(tmpdir):
    tmpdir.join("extra.json").write(json.dumps(OVERFLOW))
    result = runner.invoke(accsim.cli.cli, ["presets", "--scenarios", str(tmpdir)])
    assert result.exit_code == 0
    assert "extra" in result.output
    assert "short-case2" not in result.output


def test_validate_admissible():
    result = runner.invoke(accsim.cli.cli, ["validate", "case1"])
    assert not result.exception
    assert result.exit_code == 0
    assert "Vehicle 2: admissible (set C)" in result.output
    assert "dg1" in result.output


def test_validate_inadmissible():
    result = runner.invoke(accsim.cli.cli, ["validate", "case4"])
    assert result.exit_code == 2
    assert "Vehicle 2: inadmissible (set C)" in result.output
    assert "violated at s = 0.5: -2" in result.output
    assert "Inadmissible attack" in result.output


def test_validate_scenario_file():
    result = runner.invoke(accsim.cli.cli, ["validate", "short-case4"])
    assert result.exit_code == 2


def test_validate_scenario_path(tmpdir):
    result = runner.invoke(accsim.cli.cli, ["validate", overflow_file(tmpdir)])
    assert result.exit_code == 2


def test_validate_strict():
    result = runner.invoke(accsim.cli.cli, ["validate", "case3", "--strict"])
    assert result.exit_code == 0
    assert "set C, strict" in result.output


def test_validate_rdc():
    result = runner.invoke(accsim.cli.cli, ["validate", "case2", "--rdc"])
    assert result.exit_code == 0
    assert "(set RDC)" in result.output
    assert "beta1" in result.output


def test_validate_no_attacks():
    result = runner.invoke(accsim.cli.cli, ["validate", "baseline"])
    assert result.exit_code == 0
    assert "Scenario 'baseline': no attacks declared" in result.output


def test_validate_multiplicative():
    result = runner.invoke(accsim.cli.cli, ["validate", "example3"])
    assert result.exit_code == 0
    assert "Vehicle 2: admissible (set D)" in result.output


def test_run(tmpdir):
    result = runner.invoke(
        accsim.cli.cli, ["run", "short-case2", "--output", str(tmpdir)]
    )
    assert not result.exception
    assert result.exit_code == 0
    assert "Scenario: short-case2" in result.output
    assert "Attack on vehicle 2: admissible" in result.output
    assert "average" in result.output
    assert tmpdir.join("short-case2", "trajectory.csv").exists()
    assert tmpdir.join("short-case2", "summary.json").exists()


def test_run_json(tmpdir):
    json_runner = CliRunner(env=ENV, mix_stderr=False)
    result = json_runner.invoke(
        accsim.cli.cli, ["run", "short-baseline", "--json", "-o", str(tmpdir)]
    )
    assert result.exit_code == 0
    summary = json.loads(result.stdout)
    assert summary["scenario"] == "short-baseline"
    assert summary["verdicts"] == {}
    assert summary["metrics"]["asv"] == pytest.approx(0.0, abs=1e-9)


def test_run_dt_override(tmpdir):
    result = runner.invoke(
        accsim.cli.cli, ["run", "short-case2", "--dt", "0.025", "-o", str(tmpdir)]
    )
    assert result.exit_code == 0
    lines = tmpdir.join("short-case2", "speed.csv").readlines()
    assert len(lines) == 1 + 801


def test_run_dt_incompatible(tmpdir):
    result = runner.invoke(
        accsim.cli.cli, ["run", "short-case2", "--dt", "0.3", "-o", str(tmpdir)]
    )
    assert result.exit_code == 1
    assert "--dt 0.3" in result.output


def test_run_simulation_failure(tmpdir):
    result = runner.invoke(
        accsim.cli.cli, ["run", overflow_file(tmpdir), "-o", str(tmpdir)]
    )
    assert result.exit_code == 3
    assert "FAILED: Simulation failed" in result.output
    assert tmpdir.join("overflow", "trajectory.csv").exists()


def test_run_nonexistent():
    result = runner.invoke(accsim.cli.cli, ["run", "case7"])
    assert result.exit_code == 1
    assert "No scenario found with the name or path 'case7'." in result.output


def test_run_invalid_config(tmpdir):
    path = tmpdir.join("broken.json")
    path.write('{"vehicles": [{"kind": "leader"}], "horizon": 1}')
    result = runner.invoke(accsim.cli.cli, ["run", str(path)])
    assert result.exit_code == 1
    assert "Misconfigured" in result.output
    assert "'horizon' was unexpected" in result.output


def test_run_unknown_option():
    result = runner.invoke(accsim.cli.cli, ["run", "case1", "--frobnicate"])
    assert result.exit_code == 1
    assert "No such option" in result.output


def test_missing_argument():
    result = runner.invoke(accsim.cli.cli, ["validate"])
    assert result.exit_code == 1
    assert "Missing argument" in result.output


def test_unknown_command():
    result = runner.invoke(accsim.cli.cli, ["frobnicate"])
    assert result.exit_code == 1


def test_dump_config():
    result = runner.invoke(accsim.cli.cli, ["dump-config", "case2"])
    assert result.exit_code == 0
    assert result.output == dump_config(accsim.presets.get_preset("case2"))


def test_dump_config_to_file_and_back(tmpdir):
    path = str(tmpdir.join("case3-copy.json"))
    result = runner.invoke(
        accsim.cli.cli, ["dump-config", "case3", "--dt", "0.025", "-o", path]
    )
    assert result.exit_code == 0
    with open(path) as dumped:
        data = json.load(dumped)
    assert data["dt"] == 0.025
    assert data["vehicles"][1]["attack"]["g1"] == "-0.9*s"

    result = runner.invoke(accsim.cli.cli, ["validate", path])
    assert result.exit_code == 0


def test_batch(tmpdir):
    result = runner.invoke(
        accsim.cli.cli,
        ["batch", "short-baseline", "short-case2", "short-case4", "-o", str(tmpdir)],
    )
    assert not result.exception
    assert result.exit_code == 0
    lines = result.output.splitlines()
    header = next(line for line in lines if line.startswith("Scenario"))
    assert "Verdict" in header
    assert "Fuel %" in header
    rows = {line.split()[0]: line for line in lines if line.startswith("short-")}
    assert "-" in rows["short-baseline"].split()[1]
    assert "admissible" in rows["short-case2"].split()
    assert "inadmissible" in rows["short-case4"].split()
    assert f"Outputs written to {os.path.abspath(str(tmpdir))}" in result.output
    for name in ("short-baseline", "short-case2", "short-case4"):
        assert tmpdir.join(name, "summary.json").exists()


def test_batch_parallel(tmpdir):
    result = runner.invoke(
        accsim.cli.cli,
        ["batch", "short-baseline", "short-case2", "-j", "2", "-o", str(tmpdir)],
    )
    assert result.exit_code == 0
    assert tmpdir.join("short-case2", "speed.csv").exists()


def test_batch_with_failure(tmpdir):
    result = runner.invoke(
        accsim.cli.cli,
        ["batch", "short-case2", overflow_file(tmpdir), "-o", str(tmpdir)],
    )
    assert result.exit_code == 3
    row = next(line for line in result.output.splitlines() if "overflow" in line)
    assert row.split()[-1] == "failed"


def test_batch_duplicate_names(tmpdir):
    result = runner.invoke(
        accsim.cli.cli, ["batch", "case1", "case1", "-o", str(tmpdir)]
    )
    assert result.exit_code == 1
    assert "duplicate scenario names" in result.output


def test_completion_choices(app):
    param = accsim.cli.run_run.params[0]
    with app.app_context():
        choices = accsim.cli_util._get_completion_choices(param)
    assert "case1" in choices
    assert "short-case2" in choices

"""Unit tests for the admissibility checks"""

import logging
import re

import numpy as np
import pytest

import accsim.presets
from accsim.attack import AttackSpec
from accsim.exception import ConfigurationException
from accsim.validate import (
    MAX_LISTED_VIOLATIONS,
    MeasurementDomain,
    Verdict,
    check_additive,
    check_multiplicative,
    check_rationality,
    classify,
)

SMALL = MeasurementDomain(grid_points=201)

# unit spacing, s = 100 is a grid point
POLE_GRID = MeasurementDomain(s_range=(1.0, 201.0), grid_points=201)


def additive(g1, g2=None):
    return AttackSpec.from_strings(g1, g2 or re.sub(r"\bs\b", "dv", g1))


def multiplicative(g1, g2="1"):
    return AttackSpec.from_strings(g1, g2, "multiplicative")


def test_domain_defaults():
    dom = MeasurementDomain()
    assert dom.s_range == (0.5, 200.0)
    assert dom.dv_range == (-30.0, 30.0)
    assert dom.grid_points == 2001
    assert len(dom.s_grid()) == 2001
    assert dom.s_grid()[0] == 0.5
    assert dom.dv_grid()[-1] == 30.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"s_range": (0.0, 200.0)},
        {"s_range": (10.0, 10.0)},
        {"dv_range": (5.0, -5.0)},
        {"grid_points": 100},
    ],
)
def test_domain_invalid(kwargs):
    with pytest.raises(ConfigurationException):
        MeasurementDomain(**kwargs)


def test_additive_sin_linear():
    report = check_additive(additive("0.4*sin(s) - 0.5*s"))
    assert report.verdict is Verdict.ADMISSIBLE
    assert report.tested_set == "C"
    for channel in report.channels:
        assert channel.minimum >= -0.9 - 1e-9
        assert channel.maximum <= -0.1 + 1e-9
        assert channel.violations == []


def test_additive_overshoot():
    report = check_additive(additive("-2*s"))
    assert report.verdict is Verdict.INADMISSIBLE
    assert report.channel("g1").minimum == pytest.approx(-2.0)
    assert report.channel("g1").violation_count == 2001
    assert len(report.channel("g1").violations) == MAX_LISTED_VIOLATIONS
    assert len(report.violations) == MAX_LISTED_VIOLATIONS


def test_additive_inflation():
    report = check_additive(additive("10*s", "-5*dv"))
    assert report.verdict is Verdict.INADMISSIBLE
    assert report.channel("g1").verdict is Verdict.INADMISSIBLE
    assert report.channel("g2").verdict is Verdict.INADMISSIBLE


def test_additive_violation_points():
    report = check_additive(additive("-0.5*s", "0.5*dv"), SMALL)
    assert report.channel("g1").verdict is Verdict.ADMISSIBLE
    g2 = report.channel("g2")
    assert g2.verdict is Verdict.INADMISSIBLE
    x, value = g2.violations[0]
    assert x == -30.0
    assert value == pytest.approx(0.5)


@pytest.mark.parametrize("r", np.round(np.arange(-3.0, 3.05, 0.1), 10))
def test_additive_linear_sweep(r):
    report = check_additive(additive(f"{float(r)!r}*s"), SMALL)
    expected = Verdict.ADMISSIBLE if -1.0 <= r <= 0.0 else Verdict.INADMISSIBLE
    assert report.verdict is expected


def test_additive_boundary_and_strict():
    atk = additive("-s")
    assert check_additive(atk).verdict is Verdict.ADMISSIBLE
    strict = check_additive(atk, strict=True)
    assert strict.verdict is Verdict.INADMISSIBLE
    assert strict.strict


def test_additive_zero_attack():
    assert classify(additive("0")).verdict is Verdict.ADMISSIBLE


def test_additive_pole_is_inconclusive():
    atk = additive("-0.5*s + 0.01/(s - 100)", "-0.5*dv")
    report = check_additive(atk, POLE_GRID)
    g1 = report.channel("g1")
    assert g1.failing_point == pytest.approx(100.0)
    assert report.verdict is Verdict.INCONCLUSIVE


def test_additive_violation_beats_inconclusive():
    atk = additive("-0.5*s + 0.01/(s - 100)", "2*dv")
    report = check_additive(atk, POLE_GRID)
    assert report.channel("g1").verdict is Verdict.INCONCLUSIVE
    assert report.verdict is Verdict.INADMISSIBLE


def test_classify_warns_when_inconclusive(accsim_caplog):
    atk = additive("-0.5*s + 0.01/(s - 100)", "-0.5*dv")
    with accsim_caplog.at_level(logging.WARNING):
        report = classify(atk, POLE_GRID)
    assert report.verdict is Verdict.INCONCLUSIVE
    assert "inconclusive" in accsim_caplog.text


def test_check_additive_wrong_mode():
    with pytest.raises(ValueError):
        check_additive(multiplicative("1/s + 0.5"))
    with pytest.raises(ValueError):
        check_multiplicative(additive("-s"))


@pytest.mark.parametrize(
    "z,expected",
    [
        (0.1, Verdict.ADMISSIBLE),
        (0.5, Verdict.ADMISSIBLE),
        (1.0, Verdict.ADMISSIBLE),
        (1.1, Verdict.INADMISSIBLE),
        (1.5, Verdict.INADMISSIBLE),
        (-0.5, Verdict.INADMISSIBLE),
    ],
)
def test_multiplicative_reciprocal(z, expected):
    report = check_multiplicative(multiplicative(f"1/s + {z!r}"))
    assert report.tested_set == "D"
    assert report.verdict is expected
    assert report.channel("g1").minimum == pytest.approx(z)
    assert report.channel("g1").maximum == pytest.approx(z)


def test_multiplicative_identity():
    report = classify(multiplicative("1", "1"))
    assert report.verdict is Verdict.ADMISSIBLE
    assert report.tested_set == "D"


def test_multiplicative_zero_crossing():
    # q = 0.2*dv is negative for dv < 0
    report = check_multiplicative(multiplicative("1", "0.1*dv"))
    assert report.channel("g2").verdict is Verdict.INADMISSIBLE


@pytest.mark.parametrize("name", ["case1", "case2", "case3"])
def test_cases_from_admissible_set(name):
    atk = accsim.presets.get_preset(name).scenario.vehicle(2).attack
    assert classify(atk).verdict is Verdict.ADMISSIBLE


@pytest.mark.parametrize("name", ["case4", "case5", "case6"])
def test_cases_from_complement(name):
    atk = accsim.presets.get_preset(name).scenario.vehicle(2).attack
    assert classify(atk).verdict is Verdict.INADMISSIBLE


def test_example_multiplicative_preset_admissible():
    atk = accsim.presets.get_preset("example3").scenario.vehicle(2).attack
    assert classify(atk).verdict is Verdict.ADMISSIBLE


@pytest.mark.parametrize("g1", ["sin(s) + 20*s", "-2*s", "0.3*s", "-1.2*s"])
def test_grid_refinement_keeps_inadmissible(g1):
    atk = additive(g1, "-0.5*dv")
    assert check_additive(atk, SMALL).verdict is Verdict.INADMISSIBLE
    for points in (401, 1001, 2001, 4001):
        fine = MeasurementDomain(grid_points=points)
        assert check_additive(atk, fine).verdict is Verdict.INADMISSIBLE


def test_report_as_dict():
    report = check_additive(additive("-2*s", "-0.5*dv"), SMALL)
    result = report.as_dict()
    assert result["verdict"] == "inadmissible"
    assert result["tested_set"] == "C"
    g1 = result["channels"][0]
    assert g1["channel"] == "g1"
    assert g1["quantity"] == "dg1"
    assert g1["violations"][0] == {"s": 0.5, "value": -2.0}
    assert result["channels"][1]["violation_count"] == 0


def test_rationality_admissible_attack():
    report = check_rationality(additive("0.4*sin(s) - 0.5*s"), SMALL)
    assert report.tested_set == "RDC"
    assert report.verdict is Verdict.ADMISSIBLE
    assert report.channel("beta1").minimum > 0
    assert report.channel("beta3").maximum < 0


def test_rationality_boundary_attack():
    report = check_rationality(additive("-s"), SMALL)
    assert report.verdict is Verdict.ADMISSIBLE
    assert report.channel("beta1").minimum == 0.0


def test_rationality_overshoot():
    report = check_rationality(additive("-2*s"), SMALL)
    assert report.verdict is Verdict.INADMISSIBLE
    assert report.channel("beta1").maximum < 0
    assert report.channel("beta2").maximum < 0


def test_rationality_multiplicative():
    report = check_rationality(multiplicative("1/s + 0.5"), SMALL)
    assert report.verdict is Verdict.ADMISSIBLE
    assert report.channel("beta1").minimum == pytest.approx(0.01)

"""Unit tests for platoon scenarios"""

import pytest

from accsim.attack import AttackSpec
from accsim.exception import ConfigurationException
from accsim.model.attacked import AttackedOvrvModel
from accsim.model.idm import IdmModel, IdmParams
from accsim.model.ovrv import OvrvModel
from accsim.scenario import Acc, Hdv, Leader, Scenario


def attack(window=(50, 80)):
    return AttackSpec.from_strings("-0.9*s", "-0.9*dv", window=window)


def test_defaults():
    sc = Scenario([Leader(), Acc(), Hdv()])
    assert isinstance(sc.vehicles, tuple)
    assert sc.dt == 0.05
    assert sc.t_end == 200.0
    assert sc.v_star == 21.0
    assert sc.n_steps == 4000


def test_vehicle_ids_start_from_leader():
    sc = Scenario([Leader(), Acc(attack=attack()), Hdv()])
    assert isinstance(sc.vehicle(1), Leader)
    assert isinstance(sc.vehicle(2), Acc)
    assert sc.attacked_vehicles() == [2]


def test_build_models():
    assert Leader().build_model() is None
    assert isinstance(Hdv().build_model(), IdmModel)
    assert isinstance(Acc().build_model(), OvrvModel)
    assert isinstance(Acc(attack=attack()).build_model(), AttackedOvrvModel)
    assert Hdv(IdmParams(length=4.0)).length == 4.0


def test_too_few_vehicles():
    with pytest.raises(ConfigurationException) as excinfo:
        Scenario([Leader()])
    assert "at least 2 vehicles" in excinfo.value.message


def test_leader_not_first():
    with pytest.raises(ConfigurationException) as excinfo:
        Scenario([Acc(), Leader(), Hdv()], name="swapped")
    assert "the leader must be vehicle 1" in excinfo.value.message
    assert "vehicle 2: only vehicle 1 can be a leader" in excinfo.value.message
    assert excinfo.value.scenario_id == "swapped"


def test_all_errors_reported():
    with pytest.raises(ConfigurationException) as excinfo:
        Scenario([Leader(), Hdv()], dt=-0.1, v_star=40.0)
    message = excinfo.value.message
    assert "dt must be positive" in message
    assert "v_star 40.0 must be between 0 and v_max 30.0" in message


def test_horizon_not_multiple_of_dt():
    with pytest.raises(ConfigurationException) as excinfo:
        Scenario([Leader(), Hdv()], dt=0.3, t_end=10.0)
    assert "not a multiple" in excinfo.value.message


def test_attack_beyond_horizon():
    with pytest.raises(ConfigurationException) as excinfo:
        Scenario([Leader(), Acc(attack=attack((50, 80)))], t_end=60.0)
    assert "exceeds the horizon" in excinfo.value.message


def test_without_attacks():
    sc = Scenario([Leader(), Acc(attack=attack()), Hdv()], name="case3")
    base = sc.without_attacks()
    assert base.attacked_vehicles() == []
    assert base.name == "case3-baseline"
    assert base.vehicle(2).params == sc.vehicle(2).params
    assert sc.attacked_vehicles() == [2]


def test_with_dt():
    sc = Scenario([Leader(), Hdv()])
    assert sc.with_dt(0.025).n_steps == 8000
    with pytest.raises(ConfigurationException):
        sc.with_dt(0.3)


def test_scenario_is_hashable_value():
    first = Scenario([Leader(), Acc(attack=attack()), Hdv()])
    second = Scenario((Leader(), Acc(attack=attack()), Hdv()))
    assert first == second
    assert hash(first) == hash(second)


def test_no_equilibrium_at_v_star():
    # IDM desired speed is 30 m/s, the ACC vehicle has an equilibrium there
    with pytest.raises(ConfigurationException) as excinfo:
        Scenario([Leader(), Acc(), Hdv()], v_star=30.0, name="fast")
    message = excinfo.value.message
    assert "vehicle 3: no IDM equilibrium spacing at speed 30.0" in message
    assert "vehicle 2" not in message

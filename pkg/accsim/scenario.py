"""Platoon scenarios: the ordered vehicle list and the simulation settings"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Union

from accsim.attack import AttackSpec
from accsim.exception import ConfigurationException, InvalidStateException
from accsim.model.attacked import AttackedOvrvModel
from accsim.model.idm import IdmModel, IdmParams
from accsim.model.model import CarFollowingModel
from accsim.model.ovrv import OvrvModel, OvrvParams


@dataclass(frozen=True)
class Leader:
    """Lead vehicle travelling at the constant platoon speed."""

    length: float = 5.0

    kind = "leader"

    def build_model(self) -> None:
        return None


@dataclass(frozen=True)
class Hdv:
    """Human-driven vehicle following the IDM. Not susceptible to attacks."""

    params: IdmParams = field(default_factory=IdmParams)

    kind = "hdv"

    @property
    def length(self) -> float:
        return self.params.length

    def build_model(self) -> CarFollowingModel:
        return IdmModel(self.params)


@dataclass(frozen=True)
class Acc:
    """ACC vehicle following the OVRV model, optionally under attack."""

    params: OvrvParams = field(default_factory=OvrvParams)
    attack: AttackSpec | None = None

    kind = "acc"

    @property
    def length(self) -> float:
        return self.params.length

    def build_model(self) -> CarFollowingModel:
        if self.attack is None:
            return OvrvModel(self.params)
        return AttackedOvrvModel(self.params, self.attack)


VehicleSpec = Union[Leader, Hdv, Acc]


@dataclass(frozen=True)
class Scenario:
    """A platoon with the leader first. Vehicle ids start from 1 for the
    leader."""

    vehicles: tuple[VehicleSpec, ...]
    dt: float = 0.05
    t_end: float = 200.0
    v_star: float = 21.0
    accel_max: float = 1.4
    decel_max: float = 2.5
    v_max: float = 30.0
    name: str = "scenario"

    def __post_init__(self) -> None:
        object.__setattr__(self, "vehicles", tuple(self.vehicles))
        errors = self.check()
        if errors:
            raise ConfigurationException(
                "; ".join(errors), scenario_id=self.name
            )

    def check(self) -> list[str]:
        """Return a list of every violated scenario invariant."""

        errors = []
        if len(self.vehicles) < 2:
            errors.append("a platoon needs at least 2 vehicles")
        for idx, spec in enumerate(self.vehicles, start=1):
            if (idx == 1) != isinstance(spec, Leader):
                errors.append(
                    "the leader must be vehicle 1"
                    if idx == 1
                    else f"vehicle {idx}: only vehicle 1 can be a leader"
                )
        for name in ("dt", "t_end", "accel_max", "decel_max", "v_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                errors.append(f"{name} must be positive, got {value}")
        if not 0 <= self.v_star <= self.v_max:
            errors.append(
                f"v_star {self.v_star} must be between 0 and v_max {self.v_max}"
            )
        else:
            for idx, spec in enumerate(self.vehicles[1:], start=2):
                if isinstance(spec, Leader):
                    continue
                try:
                    spec.build_model().equilibrium_spacing(self.v_star)
                except InvalidStateException as err:
                    errors.append(f"vehicle {idx}: {err.message}")
        if self.dt > 0 and self.t_end > 0:
            steps = self.t_end / self.dt
            if abs(steps - round(steps)) > 1e-6:
                errors.append(
                    f"t_end {self.t_end} is not a multiple of dt {self.dt}"
                )
        for idx in self.attacked_vehicles():
            atk = self.vehicle(idx).attack
            if atk.t_off > self.t_end:
                errors.append(
                    f"vehicle {idx}: attack window [{atk.t_on}, {atk.t_off}] "
                    f"exceeds the horizon [0, {self.t_end}]"
                )
        return errors

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def vehicle(self, vehicle_id: int) -> VehicleSpec:
        return self.vehicles[vehicle_id - 1]

    def attacked_vehicles(self) -> list[int]:
        return [
            idx
            for idx, spec in enumerate(self.vehicles, start=1)
            if isinstance(spec, Acc) and spec.attack is not None
        ]

    def without_attacks(self) -> Scenario:
        """Return the baseline counterpart with every attack removed."""

        vehicles = tuple(
            dataclasses.replace(spec, attack=None) if isinstance(spec, Acc) else spec
            for spec in self.vehicles
        )
        return dataclasses.replace(
            self, vehicles=vehicles, name=f"{self.name}-baseline"
        )

    def with_dt(self, dt: float) -> Scenario:
        return dataclasses.replace(self, dt=dt)

"""Fixed-step integration of the platoon dynamics"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from accsim import logger
from accsim.exception import EvaluationException, SimulationFailedException
from accsim.scenario import Hdv, Scenario


@dataclass(frozen=True)
class VehicleState:
    x: float
    v: float


@dataclass(frozen=True)
class CollisionEvent:
    follower: int
    time: float


@dataclass
class ClampCounts:
    """Number of recorded steps in which a limit was enforced."""

    accel_high: int = 0
    accel_low: int = 0
    speed_zero: int = 0
    speed_max: int = 0

    @property
    def total(self) -> int:
        return self.accel_high + self.accel_low + self.speed_zero + self.speed_max

    def as_dict(self) -> dict[str, int]:
        return {
            "accel_high": self.accel_high,
            "accel_low": self.accel_low,
            "speed_zero": self.speed_zero,
            "speed_max": self.speed_max,
        }


@dataclass
class Trajectory:
    """Time series of all vehicle states on the fixed step grid. Arrays are
    indexed by [step, vehicle id - 1]."""

    time: np.ndarray
    position: np.ndarray
    speed: np.ndarray
    accel: np.ndarray
    lengths: tuple[float, ...]
    collisions: list[CollisionEvent] = field(default_factory=list)
    clamps: dict[int, ClampCounts] = field(default_factory=dict)
    attack_windows: dict[int, tuple[float, float]] = field(default_factory=dict)
    scenario_name: str = ""

    @property
    def n_vehicles(self) -> int:
        return self.position.shape[1]

    @property
    def dt(self) -> float:
        return float(self.time[1] - self.time[0])

    @property
    def collided(self) -> bool:
        return bool(self.collisions)

    def spacings(self) -> np.ndarray:
        """Spacings of vehicles 2..n to the vehicle ahead, one column per
        follower."""
        lengths = np.asarray(self.lengths[:-1])
        return self.position[:, :-1] - self.position[:, 1:] - lengths

    def min_spacing(self, vehicle_id: int) -> float:
        if vehicle_id < 2:
            raise ValueError("the leader has no spacing")
        return float(self.spacings()[:, vehicle_id - 2].min())

    def collision_of(self, vehicle_id: int) -> CollisionEvent | None:
        for event in self.collisions:
            if event.follower == vehicle_id:
                return event
        return None

    def states_at(self, step: int) -> list[VehicleState]:
        return [
            VehicleState(float(x), float(v))
            for x, v in zip(self.position[step], self.speed[step])
        ]

    def as_dict(self) -> dict[str, Any]:
        return {
            "collisions": [
                {"follower": event.follower, "time": event.time}
                for event in self.collisions
            ],
            "clamps": {
                str(vehicle_id): counts.as_dict()
                for vehicle_id, counts in self.clamps.items()
            },
            "attack_windows": {
                str(vehicle_id): list(window)
                for vehicle_id, window in self.attack_windows.items()
            },
        }


class PlatoonDynamics:
    """Right-hand side of the platoon ODE with clamping, and the RK4 step.
    Attack windows are snapped to the step grid and every stage of a step uses
    the attack state at the start of the step, so the right-hand side is
    smooth within each step."""

    def __init__(self, sc: Scenario) -> None:
        self.scenario = sc
        self.dt = sc.dt
        self.models = [spec.build_model() for spec in sc.vehicles]
        self.lengths = [spec.length for spec in sc.vehicles]
        self.is_hdv = [isinstance(spec, Hdv) for spec in sc.vehicles]
        self.windows = {}
        for idx in sc.attacked_vehicles():
            atk = sc.vehicle(idx).attack
            k_on = int(round(atk.t_on / sc.dt))
            k_off = int(round(atk.t_off / sc.dt))
            if k_on == k_off:
                logger.warning(
                    f"attack window of vehicle {idx} is shorter than one step"
                )
            logger.debug(
                f"vehicle {idx} attack window snapped to "
                f"[{k_on * sc.dt}, {k_off * sc.dt}]"
            )
            self.windows[idx - 1] = (k_on, k_off)

    def attack_windows(self) -> dict[int, tuple[float, float]]:
        return {
            idx + 1: (start * self.dt, end * self.dt)
            for idx, (start, end) in self.windows.items()
        }

    def _attacked(self, idx: int, k: int) -> bool:
        window = self.windows.get(idx)
        return window is not None and window[0] <= k < window[1]

    def accelerations(
        self,
        x: list[float],
        v: list[float],
        k: int,
        clamps: dict[int, ClampCounts] | None = None,
    ) -> list[float]:
        """Clamped accelerations of all vehicles during step k. Clamp
        activations are counted into clamps when it is given."""

        sc = self.scenario
        result = [0.0]
        for i in range(1, len(x)):
            s = x[i - 1] - x[i] - self.lengths[i - 1]
            dv = v[i - 1] - v[i]
            if s <= 0 and self.is_hdv[i]:
                # collision state, the IDM is undefined here
                a = -sc.decel_max
            else:
                a = self.models[i].accel(s, dv, v[i], self._attacked(i, k))
            if a > sc.accel_max:
                a = sc.accel_max
                if clamps is not None:
                    clamps[i + 1].accel_high += 1
            elif a < -sc.decel_max:
                a = -sc.decel_max
                if clamps is not None:
                    clamps[i + 1].accel_low += 1
            if (v[i] <= 0.0 and a < 0.0) or (v[i] >= sc.v_max and a > 0.0):
                a = 0.0
            result.append(a)
        return result

    def _velocities(self, v: list[float]) -> list[float]:
        v_max = self.scenario.v_max
        return [min(max(vi, 0.0), v_max) for vi in v]

    def step(
        self,
        x: list[float],
        v: list[float],
        k: int,
        clamps: dict[int, ClampCounts] | None = None,
    ) -> tuple[list[float], list[float], list[float]]:
        """Advance from t = k*dt to (k+1)*dt with classical RK4. Returns the
        new positions and speeds and the clamped accelerations at t."""

        sc = self.scenario
        dt = self.dt
        half = dt / 2.0
        n = len(x)

        a1 = self.accelerations(x, v, k, clamps)
        xd1 = self._velocities(v)
        x2 = [x[i] + half * xd1[i] for i in range(n)]
        v2 = [v[i] + half * a1[i] for i in range(n)]
        a2 = self.accelerations(x2, v2, k)
        xd2 = self._velocities(v2)
        x3 = [x[i] + half * xd2[i] for i in range(n)]
        v3 = [v[i] + half * a2[i] for i in range(n)]
        a3 = self.accelerations(x3, v3, k)
        xd3 = self._velocities(v3)
        x4 = [x[i] + dt * xd3[i] for i in range(n)]
        v4 = [v[i] + dt * a3[i] for i in range(n)]
        a4 = self.accelerations(x4, v4, k)
        xd4 = self._velocities(v4)

        new_x = [
            x[i] + dt / 6.0 * (xd1[i] + 2.0 * xd2[i] + 2.0 * xd3[i] + xd4[i])
            for i in range(n)
        ]
        new_v = [
            v[i] + dt / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i])
            for i in range(n)
        ]
        for i in range(1, n):
            if new_v[i] < 0.0:
                new_v[i] = 0.0
                if clamps is not None:
                    clamps[i + 1].speed_zero += 1
            elif new_v[i] > sc.v_max:
                new_v[i] = sc.v_max
                if clamps is not None:
                    clamps[i + 1].speed_max += 1
        # the leader follows its profile exactly
        new_x[0] = sc.v_star * ((k + 1) * dt)
        new_v[0] = sc.v_star
        return new_x, new_v, a1


def init_platoon(sc: Scenario) -> list[VehicleState]:
    """Place the platoon at rest relative to the leader: every vehicle at
    v_star and every follower at its own equilibrium spacing."""

    states = [VehicleState(0.0, sc.v_star)]
    for idx in range(2, len(sc.vehicles) + 1):
        spec = sc.vehicle(idx)
        spacing = spec.build_model().equilibrium_spacing(sc.v_star)
        ahead = sc.vehicle(idx - 1)
        logger.debug(f"vehicle {idx} starts at equilibrium spacing {spacing}")
        states.append(VehicleState(states[-1].x - ahead.length - spacing, sc.v_star))
    return states


def step(sc: Scenario, states: list[VehicleState], t: float) -> list[VehicleState]:
    """Advance the states by one step of size sc.dt from grid time t."""

    k = int(round(t / sc.dt))
    x = [state.x for state in states]
    v = [state.v for state in states]
    new_x, new_v, _ = PlatoonDynamics(sc).step(x, v, k)
    _check_finite(new_x, new_v, (k + 1) * sc.dt)
    return [VehicleState(xi, vi) for xi, vi in zip(new_x, new_v)]


def _check_finite(x: list[float], v: list[float], t: float) -> None:
    for idx, (xi, vi) in enumerate(zip(x, v), start=1):
        if not (math.isfinite(xi) and math.isfinite(vi)):
            raise SimulationFailedException(
                f"vehicle {idx} reached a non-finite state (x={xi}, v={vi}) "
                f"at t={t}"
            )


def _detect_collisions(
    x: list[float],
    lengths: list[float],
    t: float,
    collisions: dict[int, CollisionEvent],
) -> None:
    for i in range(1, len(x)):
        vehicle_id = i + 1
        if vehicle_id in collisions:
            continue
        if x[i - 1] - x[i] - lengths[i - 1] <= 0:
            logger.debug(f"vehicle {vehicle_id} collided at t={t}")
            collisions[vehicle_id] = CollisionEvent(vehicle_id, t)


def simulate(sc: Scenario) -> Trajectory:
    """Integrate the scenario over its horizon. Collisions are recorded and
    the integration continues past them."""

    dynamics = PlatoonDynamics(sc)
    n_steps = sc.n_steps
    n = len(sc.vehicles)
    time = np.arange(n_steps + 1) * sc.dt
    position = np.empty((n_steps + 1, n))
    speed = np.empty((n_steps + 1, n))
    accel = np.empty((n_steps + 1, n))
    clamps = {vehicle_id: ClampCounts() for vehicle_id in range(2, n + 1)}
    collisions = {}

    states = init_platoon(sc)
    x = [state.x for state in states]
    v = [state.v for state in states]
    position[0] = x
    speed[0] = v
    _detect_collisions(x, dynamics.lengths, 0.0, collisions)

    def trajectory(rows: int) -> Trajectory:
        return Trajectory(
            time=time[:rows],
            position=position[:rows],
            speed=speed[:rows],
            accel=accel[:rows],
            lengths=tuple(dynamics.lengths),
            collisions=sorted(collisions.values(), key=lambda e: (e.time, e.follower)),
            clamps=clamps,
            attack_windows=dynamics.attack_windows(),
            scenario_name=sc.name,
        )

    for k in range(n_steps):
        t_next = float(time[k + 1])
        try:
            x, v, a = dynamics.step(x, v, k, clamps)
            _check_finite(x, v, t_next)
        except (EvaluationException, SimulationFailedException) as err:
            accel[k] = np.nan
            raise SimulationFailedException(
                f"integration stopped at t={time[k]}: {err.format_message()}",
                partial=trajectory(k + 1),
                scenario_id=sc.name,
            )
        accel[k] = a
        position[k + 1] = x
        speed[k + 1] = v
        _detect_collisions(x, dynamics.lengths, t_next, collisions)

    accel[n_steps] = dynamics.accelerations(x, v, n_steps)
    traj = trajectory(n_steps + 1)
    if traj.collided:
        logger.warning(
            f"scenario '{sc.name}': {len(traj.collisions)} collision(s), first "
            f"vehicle {traj.collisions[0].follower} at t={traj.collisions[0].time}"
        )
    return traj

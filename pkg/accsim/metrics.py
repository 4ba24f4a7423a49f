"""Traffic smoothness and fuel consumption metrics computed from
trajectories"""

from __future__ import annotations

import dataclasses
import os.path
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np
from numpy.polynomial import polynomial
from scipy.integrate import trapezoid

from accsim import logger
from accsim.exception import ConfigurationException

if TYPE_CHECKING:
    from accsim.simulation import Trajectory

DEFAULT_COEFFICIENTS = os.path.join(
    os.path.dirname(__file__), "data", "vt_micro_ldv.txt"
)

# m/s -> km/h and m/s^2 -> km/h/s
KMH_PER_MS = 3.6

# slack when matching window endpoints to the time grid
_GRID_TOLERANCE = 1e-9

# m/s^2, accelerations this small are round-off and count as cruising; the L and
# M regressions disagree at u = 0
CRUISE_ACCEL = 1e-5


@dataclass(frozen=True)
class VtMicroCoefficients:
    """VT-Micro regression coefficients. L applies to non-negative and M to
    negative accelerations; element [p, q] multiplies speed**p * accel**q."""

    L: np.ndarray
    M: np.ndarray
    source: str = ""

    def __post_init__(self) -> None:
        for name in ("L", "M"):
            matrix = np.asarray(getattr(self, name), dtype=float)
            if matrix.shape != (4, 4):
                raise ConfigurationException(
                    f"VT-Micro matrix {name} must be 4x4, got shape {matrix.shape}"
                )
            if not np.isfinite(matrix).all():
                raise ConfigurationException(
                    f"VT-Micro matrix {name} has non-finite entries"
                )
            object.__setattr__(self, name, matrix)


def load_coefficients(path: str | None = None) -> VtMicroCoefficients:
    """Load coefficients from a whitespace separated text file holding the
    L rows followed by the M rows. Comment lines start with '#'; a comment
    of the form 'source: ...' is kept as provenance."""

    path = path or DEFAULT_COEFFICIENTS
    source = ""
    try:
        with open(path, encoding="utf-8") as coeffile:
            for line in coeffile:
                comment = line.lstrip("# ").strip()
                if line.startswith("#") and comment.startswith("source:"):
                    source = comment[len("source:") :].strip()
        rows = np.loadtxt(path, comments="#", ndmin=2)
    except (OSError, ValueError) as err:
        raise ConfigurationException(f"cannot read VT-Micro coefficients: {err}")
    if rows.shape != (8, 4):
        raise ConfigurationException(
            f"VT-Micro coefficient file {path} must have 8 rows of 4 values, "
            f"got shape {rows.shape}"
        )
    logger.debug(f"loaded VT-Micro coefficients from {path} ({source})")
    return VtMicroCoefficients(rows[:4], rows[4:], source)


def vt_micro_moe(c: VtMicroCoefficients, v: Any, u: Any) -> Any:
    """Fuel rate in L/s for speed v in km/h and acceleration u in km/h/s.
    Accepts scalars or arrays."""

    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    log_rate = np.where(
        u >= 0,
        polynomial.polyval2d(v, u, c.L),
        polynomial.polyval2d(v, u, c.M),
    )
    return np.exp(log_rate)


def _window_rows(traj: Trajectory, t1: float, t2: float) -> np.ndarray:
    if not t1 < t2:
        raise ValueError(f"empty metric window [{t1}, {t2}]")
    if t1 < traj.time[0] - _GRID_TOLERANCE or t2 > traj.time[-1] + _GRID_TOLERANCE:
        raise ValueError(
            f"metric window [{t1}, {t2}] is outside the trajectory "
            f"[{traj.time[0]}, {traj.time[-1]}]"
        )
    rows = (traj.time >= t1 - _GRID_TOLERANCE) & (traj.time <= t2 + _GRID_TOLERANCE)
    if rows.sum() < 2:
        raise ValueError(f"metric window [{t1}, {t2}] holds fewer than 2 samples")
    return rows


def asv(
    traj: Trajectory,
    v_star: float,
    t1: float,
    t2: float,
    first: int = 2,
    last: int | None = None,
) -> float:
    """Average speed variation: the mean absolute deviation from v_star per
    vehicle and per second, for vehicles first..last over [t1, t2]."""

    last = traj.n_vehicles if last is None else last
    if not 1 <= first <= last <= traj.n_vehicles:
        raise ValueError(f"invalid vehicle range {first}..{last}")
    rows = _window_rows(traj, t1, t2)
    deviation = np.abs(traj.speed[rows, first - 1 : last] - v_star)
    integrals = trapezoid(deviation, traj.time[rows], axis=0)
    return float(integrals.sum() / ((last - first + 1) * (t2 - t1)))


def fuel(
    traj: Trajectory,
    c: VtMicroCoefficients,
    window: tuple[float, float],
    vehicle_id: int,
) -> float:
    """Fuel in liters consumed by one vehicle over the window."""

    rows = _window_rows(traj, *window)
    v = traj.speed[rows, vehicle_id - 1] * KMH_PER_MS
    accel = traj.accel[rows, vehicle_id - 1]
    u = np.where(np.abs(accel) <= CRUISE_ACCEL, 0.0, accel) * KMH_PER_MS
    return float(trapezoid(vt_micro_moe(c, v, u), traj.time[rows]))


@dataclass(frozen=True)
class MetricsSettings:
    """Windows and vehicle range the metrics are computed over. A missing
    fuel window means the whole trajectory."""

    asv_window: tuple[float, float] = (50.0, 200.0)
    fuel_window: tuple[float, float] | None = None
    first: int = 2
    last: int | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "asv_window": list(self.asv_window),
            "fuel_window": None if self.fuel_window is None else list(self.fuel_window),
            "first": self.first,
            "last": self.last,
        }


@dataclass
class MetricsReport:
    asv: float
    asv_window: tuple[float, float]
    fuel_window: tuple[float, float]
    fuel_per_vehicle: dict[int, float]
    fleet_avg_fuel: float
    collision_tainted: bool = False
    min_spacing: dict[int, float] = field(default_factory=dict)
    attacked_vehicles: tuple[int, ...] = ()
    pct_fuel_per_vehicle: dict[int, float] | None = None
    pct_fleet_avg_fuel: float | None = None

    @property
    def has_baseline(self) -> bool:
        return self.pct_fleet_avg_fuel is not None

    def as_dict(self) -> dict[str, Any]:
        result = {
            "asv": self.asv,
            "asv_window": list(self.asv_window),
            "fuel_window": list(self.fuel_window),
            "fuel_per_vehicle": {
                str(vid): value for vid, value in self.fuel_per_vehicle.items()
            },
            "fleet_avg_fuel": self.fleet_avg_fuel,
            "collision_tainted": self.collision_tainted,
            "min_spacing": {str(vid): value for vid, value in self.min_spacing.items()},
            "attacked_vehicles": list(self.attacked_vehicles),
        }
        if self.has_baseline:
            result["pct_fuel_per_vehicle"] = {
                str(vid): value for vid, value in self.pct_fuel_per_vehicle.items()
            }
            result["pct_fleet_avg_fuel"] = self.pct_fleet_avg_fuel
        return result


def compute_metrics(
    traj: Trajectory,
    c: VtMicroCoefficients,
    v_star: float,
    settings: MetricsSettings | None = None,
    attacked_vehicles: tuple[int, ...] = (),
) -> MetricsReport:
    settings = settings or MetricsSettings()
    last = traj.n_vehicles if settings.last is None else settings.last
    fuel_window = settings.fuel_window or (
        float(traj.time[0]),
        float(traj.time[-1]),
    )
    vehicles = range(settings.first, last + 1)
    fuels = {vid: fuel(traj, c, fuel_window, vid) for vid in vehicles}
    report = MetricsReport(
        asv=asv(traj, v_star, *settings.asv_window, settings.first, last),
        asv_window=tuple(settings.asv_window),
        fuel_window=tuple(fuel_window),
        fuel_per_vehicle=fuels,
        fleet_avg_fuel=float(np.mean(list(fuels.values()))),
        collision_tainted=traj.collided,
        min_spacing={
            vid: traj.min_spacing(vid) for vid in range(2, traj.n_vehicles + 1)
        },
        attacked_vehicles=tuple(attacked_vehicles),
    )
    if report.collision_tainted:
        logger.warning(
            f"metrics of '{traj.scenario_name}' come from a run with collisions"
        )
    return report


def _pct(base: float, attacked: float) -> float:
    if base == 0:
        raise ValueError("cannot compute a percentage change from a zero baseline")
    return 100.0 * (attacked - base) / base


def compare_to_baseline(base: MetricsReport, attacked: MetricsReport) -> MetricsReport:
    """Return a copy of the attacked report with fuel percentage changes
    relative to the baseline report."""

    if set(base.fuel_per_vehicle) != set(attacked.fuel_per_vehicle):
        raise ValueError("baseline and attacked reports cover different vehicles")
    if base.fuel_window != attacked.fuel_window:
        raise ValueError("baseline and attacked reports use different fuel windows")
    return dataclasses.replace(
        attacked,
        pct_fuel_per_vehicle={
            vid: _pct(base.fuel_per_vehicle[vid], value)
            for vid, value in attacked.fuel_per_vehicle.items()
        },
        pct_fleet_avg_fuel=_pct(base.fleet_avg_fuel, attacked.fleet_avg_fuel),
    )

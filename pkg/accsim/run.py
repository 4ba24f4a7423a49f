"""Running scenarios: simulation, admissibility verdicts, metrics and the
files written for each run"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from typing import Any

import accsim
from accsim.config import ScenarioConfig, dump_config
from accsim.exception import InvalidStateException, SimulationFailedException
from accsim.metrics import (
    MetricsReport,
    VtMicroCoefficients,
    compare_to_baseline,
    compute_metrics,
    load_coefficients,
)
from accsim.simulation import CollisionEvent, Trajectory, simulate
from accsim.util import atomic_save, format_number
from accsim.validate import AdmissibilityReport, Verdict, classify

logger = accsim.logger

TRAJECTORY_FILE = "trajectory.csv"
SPEED_FILE = "speed.csv"
DISPLACEMENT_FILE = "displacement.csv"
SUMMARY_FILE = "summary.json"


def scenario_digest(cfg: ScenarioConfig) -> str:
    return hashlib.sha256(dump_config(cfg).encode("utf-8")).hexdigest()


@dataclass
class RunSummary:
    scenario: str
    digest: str
    verdicts: dict[int, AdmissibilityReport] = field(default_factory=dict)
    metrics: MetricsReport | None = None
    collisions: list[CollisionEvent] = field(default_factory=list)
    duration: float = 0.0
    output_dir: str | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    @property
    def inadmissible(self) -> list[int]:
        return [
            vid
            for vid, report in self.verdicts.items()
            if report.verdict is Verdict.INADMISSIBLE
        ]

    def as_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "digest": self.digest,
            "verdicts": {
                str(vid): report.as_dict() for vid, report in self.verdicts.items()
            },
            "metrics": None if self.metrics is None else self.metrics.as_dict(),
            "collisions": [
                {"follower": event.follower, "time": event.time}
                for event in self.collisions
            ],
            "duration": self.duration,
            "error": self.error,
        }

    def format(self) -> str:
        """Human readable summary"""

        lines = [f"Scenario: {self.scenario} ({self.digest[:12]})"]
        if not self.verdicts:
            lines.append("Attacks: none declared")
        for vid, report in self.verdicts.items():
            lines.append(
                f"Attack on vehicle {vid}: {report.verdict.value} "
                f"(set {report.tested_set})"
            )
        if self.error is not None:
            lines.append(f"FAILED: {self.error}")
        for event in self.collisions:
            lines.append(f"Collision: vehicle {event.follower} at t={event.time:g}")
        if self.metrics is not None:
            m = self.metrics
            lines.append(
                f"ASV over {list(m.asv_window)}: {format_number(m.asv)} m/s"
            )
            lines.append(f"Fuel over {list(m.fuel_window)} (L, change vs. baseline):")
            for vid, value in m.fuel_per_vehicle.items():
                pct = ""
                if m.pct_fuel_per_vehicle is not None:
                    pct = f"  {m.pct_fuel_per_vehicle[vid]:+.3f}%"
                lines.append(f"  vehicle {vid:<3} {format_number(value)}{pct}")
            pct = ""
            if m.pct_fleet_avg_fuel is not None:
                pct = f"  {m.pct_fleet_avg_fuel:+.3f}%"
            lines.append(f"  average     {format_number(m.fleet_avg_fuel)}{pct}")
            if m.collision_tainted:
                lines.append("  (metrics come from a run with collisions)")
        lines.append(f"Duration: {self.duration:.2f} s")
        return "\n".join(lines)


def _write_csv(rows: tuple[list[str], list[list[float]]], path: str) -> None:
    header, values = rows
    with open(path, "w", encoding="utf-8", newline="") as csvfile:
        writer = csv.writer(csvfile, lineterminator="\n")
        writer.writerow(header)
        for row in values:
            writer.writerow(format_number(value) for value in row)


def _write_json(obj: dict[str, Any], path: str) -> None:
    with open(path, "w", encoding="utf-8") as jsonfile:
        json.dump(obj, jsonfile, indent=2)
        jsonfile.write("\n")


def trajectory_rows(traj: Trajectory) -> tuple[list[str], list[list[float]]]:
    """Header and rows of the trajectory table: t, then x, v and a of each
    vehicle."""

    header = ["t"]
    for vid in range(1, traj.n_vehicles + 1):
        header.extend([f"x_{vid}", f"v_{vid}", f"a_{vid}"])
    rows = []
    for step, t in enumerate(traj.time):
        row = [t]
        for idx in range(traj.n_vehicles):
            row.extend(
                [
                    traj.position[step, idx],
                    traj.speed[step, idx],
                    traj.accel[step, idx],
                ]
            )
        rows.append(row)
    return header, rows


def series_rows(
    traj: Trajectory, quantity: str
) -> tuple[list[str], list[list[float]]]:
    """Header and rows of one quantity ("speed" or "position") against time,
    one column per vehicle."""

    prefix = "v" if quantity == "speed" else "x"
    data = getattr(traj, quantity)
    header = ["t"] + [f"{prefix}_{vid}" for vid in range(1, traj.n_vehicles + 1)]
    rows = [[t] + list(data[step]) for step, t in enumerate(traj.time)]
    return header, rows


def write_outputs(
    traj: Trajectory, summary: RunSummary, dirname: str, svg: bool = False
) -> None:
    os.makedirs(dirname, exist_ok=True)
    atomic_save(trajectory_rows(traj), dirname, TRAJECTORY_FILE, _write_csv)
    atomic_save(series_rows(traj, "speed"), dirname, SPEED_FILE, _write_csv)
    atomic_save(
        series_rows(traj, "position"), dirname, DISPLACEMENT_FILE, _write_csv
    )
    if svg:
        from accsim import plot

        plot.write_profiles(traj, dirname)
    write_summary(summary, dirname)


def write_summary(summary: RunSummary, dirname: str) -> None:
    os.makedirs(dirname, exist_ok=True)
    atomic_save(summary.as_dict(), dirname, SUMMARY_FILE, _write_json)


def validate_only(
    cfg: ScenarioConfig, strict: bool = False
) -> dict[int, AdmissibilityReport]:
    """Admissibility reports of every attacked vehicle, without simulating."""

    sc = cfg.scenario
    return {
        vid: classify(sc.vehicle(vid).attack, cfg.domain, strict=strict)
        for vid in sc.attacked_vehicles()
    }


def run(
    cfg: ScenarioConfig,
    output_dir: str | None = None,
    coefficients: VtMicroCoefficients | None = None,
    svg: bool = False,
) -> RunSummary:
    """Simulate the scenario and its unattacked counterpart, compute the
    metrics and write the outputs into output_dir/<scenario name>. A failed
    simulation is reported in the summary instead of raising."""

    started = time.perf_counter()
    sc = cfg.scenario
    coefficients = coefficients or load_coefficients()
    dirname = None if output_dir is None else os.path.join(output_dir, cfg.name)
    summary = RunSummary(
        scenario=cfg.name,
        digest=scenario_digest(cfg),
        verdicts=validate_only(cfg),
        output_dir=dirname,
    )
    logger.info(f"running scenario '{cfg.name}'")

    try:
        traj = simulate(sc)
    except (SimulationFailedException, InvalidStateException) as err:
        summary.error = err.format_message()
        summary.duration = time.perf_counter() - started
        logger.error(summary.error)
        if dirname is not None:
            partial = getattr(err, "partial", None)
            if partial is not None:
                write_outputs(partial, summary, dirname)
            else:
                write_summary(summary, dirname)
        return summary

    summary.collisions = list(traj.collisions)
    attacked = tuple(sc.attacked_vehicles())
    metrics = compute_metrics(traj, coefficients, sc.v_star, cfg.metrics, attacked)
    if attacked:
        base_traj = simulate(sc.without_attacks())
        base = compute_metrics(base_traj, coefficients, sc.v_star, cfg.metrics)
    else:
        base = metrics
    summary.metrics = compare_to_baseline(base, metrics)
    summary.duration = time.perf_counter() - started
    if dirname is not None:
        write_outputs(traj, summary, dirname, svg=svg)
    logger.info(f"scenario '{cfg.name}' done in {summary.duration:.2f} s")
    return summary

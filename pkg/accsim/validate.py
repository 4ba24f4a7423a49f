"""Admissibility checks deciding whether an attack is stealthy: additive
attacks must keep -1 <= g' <= 0 and multiplicative attacks 0 < g + x g' <= 1
over the measurement domain."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from accsim import logger
from accsim.attack import SPACING_VAR, SPEED_DIFF_VAR, AttackMode, AttackSpec
from accsim.exception import ConfigurationException, EvaluationException
from accsim.model.attacked import AttackedOvrvModel
from accsim.model.ovrv import OvrvParams
from accsim.util import parse_window

# numerical slack at the set boundaries
EPSILON = 1e-9

MIN_GRID_POINTS = 101

MAX_LISTED_VIOLATIONS = 10

DEFAULT_RATIONALITY_SPEEDS = (0.0, 10.0, 21.0, 30.0)


@dataclass(frozen=True)
class MeasurementDomain:
    """Measurement ranges over which the admissibility conditions are
    sampled, with the same grid size on both axes."""

    s_range: tuple[float, float] = (0.5, 200.0)
    dv_range: tuple[float, float] = (-30.0, 30.0)
    grid_points: int = 2001

    def __post_init__(self) -> None:
        try:
            s_range = parse_window(self.s_range, "s_range")
            dv_range = parse_window(self.dv_range, "dv_range")
        except ValueError as err:
            raise ConfigurationException(str(err))
        if s_range[0] <= 0:
            raise ConfigurationException(
                f"s_range must start above zero, got {s_range[0]}"
            )
        if self.grid_points < MIN_GRID_POINTS:
            raise ConfigurationException(
                f"grid_points must be at least {MIN_GRID_POINTS}, "
                f"got {self.grid_points}"
            )
        object.__setattr__(self, "s_range", s_range)
        object.__setattr__(self, "dv_range", dv_range)

    def s_grid(self) -> np.ndarray:
        return np.linspace(*self.s_range, self.grid_points)

    def dv_grid(self) -> np.ndarray:
        return np.linspace(*self.dv_range, self.grid_points)

    def as_dict(self) -> dict[str, Any]:
        return {
            "s_range": list(self.s_range),
            "dv_range": list(self.dv_range),
            "grid_points": self.grid_points,
        }


class Verdict(enum.Enum):
    ADMISSIBLE = "admissible"
    INADMISSIBLE = "inadmissible"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ChannelReport:
    """Outcome of the check on one measurement channel."""

    channel: str
    variable: str
    quantity: str
    minimum: float | None = None
    maximum: float | None = None
    violation_count: int = 0
    violations: list[tuple[float, float]] = field(default_factory=list)
    failing_point: float | None = None

    @property
    def verdict(self) -> Verdict:
        if self.violation_count:
            return Verdict.INADMISSIBLE
        if self.failing_point is not None:
            return Verdict.INCONCLUSIVE
        return Verdict.ADMISSIBLE

    def as_dict(self) -> dict[str, Any]:
        return {
            "channel": self.channel,
            "quantity": self.quantity,
            "verdict": self.verdict.value,
            "min": self.minimum,
            "max": self.maximum,
            "violation_count": self.violation_count,
            "violations": [
                {self.variable: x, "value": value} for x, value in self.violations
            ],
            "failing_point": self.failing_point,
        }


@dataclass
class AdmissibilityReport:
    """Verdict of an admissibility check. A definite violation on any channel
    makes the report Inadmissible even when another channel could not be
    evaluated."""

    tested_set: str
    channels: list[ChannelReport]
    strict: bool = False

    @property
    def verdict(self) -> Verdict:
        verdicts = {channel.verdict for channel in self.channels}
        for verdict in (Verdict.INADMISSIBLE, Verdict.INCONCLUSIVE):
            if verdict in verdicts:
                return verdict
        return Verdict.ADMISSIBLE

    @property
    def violations(self) -> list[tuple[str, float, float]]:
        listed = [
            (channel.channel, x, value)
            for channel in self.channels
            for x, value in channel.violations
        ]
        return listed[:MAX_LISTED_VIOLATIONS]

    def channel(self, name: str) -> ChannelReport:
        for channel in self.channels:
            if channel.channel == name:
                return channel
        raise KeyError(name)

    def as_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "tested_set": self.tested_set,
            "strict": self.strict,
            "channels": [channel.as_dict() for channel in self.channels],
        }


def _check_channel(
    channel: str,
    variable: str,
    quantity: str,
    xs: np.ndarray,
    values: np.ndarray,
    violated: Callable[[np.ndarray], np.ndarray],
) -> ChannelReport:
    report = ChannelReport(channel, variable, quantity)
    finite = np.isfinite(values)
    if not finite.all():
        report.failing_point = float(xs[np.argmin(finite)])
        logger.warning(
            f"{channel} cannot be evaluated at {variable} = {report.failing_point}"
        )
    if finite.any():
        report.minimum = float(values[finite].min())
        report.maximum = float(values[finite].max())
    bad = np.flatnonzero(finite & violated(values))
    report.violation_count = int(bad.size)
    report.violations = [
        (float(xs[i]), float(values[i])) for i in bad[:MAX_LISTED_VIOLATIONS]
    ]
    return report


def _require_mode(atk: AttackSpec, mode: AttackMode) -> None:
    if atk.mode is not mode:
        raise ValueError(
            f"{mode.value} check requested for a {atk.mode.value} attack"
        )


def check_additive(
    atk: AttackSpec, dom: MeasurementDomain | None = None, strict: bool = False
) -> AdmissibilityReport:
    """Check g' in [-1, 0] for both channels. In strict mode g' = -1 is
    rejected as well."""

    _require_mode(atk, AttackMode.ADDITIVE)
    dom = dom or MeasurementDomain()

    def violated(dg: np.ndarray) -> np.ndarray:
        too_low = dg <= -1.0 if strict else dg < -1.0 - EPSILON
        return too_low | (dg > EPSILON)

    channels = []
    for name, var, g, dg, xs in (
        ("g1", SPACING_VAR, atk.g1, atk.dg1, dom.s_grid()),
        ("g2", SPEED_DIFF_VAR, atk.g2, atk.dg2, dom.dv_grid()),
    ):
        with np.errstate(all="ignore"):
            values = dg.evaluate_many(xs)
            # the attack itself must be defined wherever it is checked
            values[~np.isfinite(g.evaluate_many(xs))] = np.nan
        channels.append(_check_channel(name, var, f"d{name}", xs, values, violated))
    report = AdmissibilityReport("C", channels, strict=strict)
    logger.debug(f"additive check of {atk.as_dict()}: {report.verdict.value}")
    return report


def check_multiplicative(
    atk: AttackSpec, dom: MeasurementDomain | None = None
) -> AdmissibilityReport:
    """Check 0 < g + x g' <= 1 for both channels."""

    _require_mode(atk, AttackMode.MULTIPLICATIVE)
    dom = dom or MeasurementDomain()

    def violated(q: np.ndarray) -> np.ndarray:
        return (q <= 0.0) | (q > 1.0 + EPSILON)

    channels = []
    for name, var, g, dg, xs in (
        ("g1", SPACING_VAR, atk.g1, atk.dg1, dom.s_grid()),
        ("g2", SPEED_DIFF_VAR, atk.g2, atk.dg2, dom.dv_grid()),
    ):
        with np.errstate(all="ignore"):
            values = g.evaluate_many(xs) + xs * dg.evaluate_many(xs)
        quantity = f"{name} + {var}*d{name}"
        channels.append(_check_channel(name, var, quantity, xs, values, violated))
    report = AdmissibilityReport("D", channels)
    logger.debug(f"multiplicative check of {atk.as_dict()}: {report.verdict.value}")
    return report


def classify(
    atk: AttackSpec, dom: MeasurementDomain | None = None, strict: bool = False
) -> AdmissibilityReport:
    """Check the attack against the admissible set matching its mode."""

    if atk.mode is AttackMode.ADDITIVE:
        report = check_additive(atk, dom, strict=strict)
    else:
        report = check_multiplicative(atk, dom)
    if report.verdict is Verdict.INCONCLUSIVE:
        logger.warning(
            f"admissibility of attack {atk.as_dict()} is inconclusive "
            "over the measurement domain"
        )
    return report


def check_rationality(
    atk: AttackSpec,
    dom: MeasurementDomain | None = None,
    params: OvrvParams | None = None,
    v_samples: tuple[float, ...] = DEFAULT_RATIONALITY_SPEEDS,
) -> AdmissibilityReport:
    """Check the rational driving signs of the attacked OVRV model. The
    spacing partial is swept over the s-grid and the relative speed partial
    over the dv-grid at each sampled speed; zero sensitivity is accepted."""

    dom = dom or MeasurementDomain()
    model = AttackedOvrvModel(params, atk)
    s_grid = dom.s_grid()
    dv_grid = dom.dv_grid()
    betas = {"beta1": [], "beta2": [], "beta3": []}
    xs = {"beta1": [], "beta2": [], "beta3": []}
    for v in v_samples:
        s_mid = model.equilibrium_spacing(v)
        for s in s_grid:
            beta1, _, beta3 = _partials_or_nan(model, float(s), 0.0, v)
            betas["beta1"].append(beta1)
            xs["beta1"].append(s)
            betas["beta3"].append(beta3)
            xs["beta3"].append(v)
        for dv in dv_grid:
            betas["beta2"].append(_partials_or_nan(model, s_mid, float(dv), v)[1])
            xs["beta2"].append(dv)

    def negative(beta: np.ndarray) -> np.ndarray:
        return beta < 0.0

    def not_negative(beta: np.ndarray) -> np.ndarray:
        return beta >= 0.0

    channels = [
        _check_channel(
            name, var, name, np.asarray(xs[name]), np.asarray(betas[name]), test
        )
        for name, var, test in (
            ("beta1", SPACING_VAR, negative),
            ("beta2", SPEED_DIFF_VAR, negative),
            ("beta3", "v", not_negative),
        )
    ]
    return AdmissibilityReport("RDC", channels)


def _partials_or_nan(
    model: AttackedOvrvModel, s: float, dv: float, v: float
) -> tuple[float, float, float]:
    try:
        return model.partials(s, dv, v, attacked=True)
    except EvaluationException:
        return (np.nan, np.nan, np.nan)

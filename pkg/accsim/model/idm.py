"""Intelligent driver model, used for the human-driven vehicles.

The relative speed follows the platoon convention dv = v_ahead - v, so an
approaching vehicle has dv < 0."""

from __future__ import annotations

import math
from dataclasses import dataclass

from accsim.exception import InvalidStateException
from accsim.model.model import CarFollowingModel, Partials, check_positive


@dataclass(frozen=True)
class IdmParams:
    v0: float = 30.0
    T: float = 1.5
    s0: float = 2.0
    a: float = 1.4
    b: float = 2.0
    length: float = 5.0

    def __post_init__(self) -> None:
        check_positive(self)


def _gap_term(p: IdmParams, dv: float, v: float) -> float:
    return v * p.T - v * dv / (2.0 * math.sqrt(p.a * p.b))


def desired_gap(p: IdmParams, dv: float, v: float) -> float:
    return p.s0 + max(0.0, _gap_term(p, dv, v))


def idm_accel(p: IdmParams, s: float, dv: float, v: float) -> float:
    if s <= 0:
        raise InvalidStateException(f"IDM queried at non-positive spacing {s}")
    s_star = desired_gap(p, dv, v)
    return p.a * (1.0 - (v / p.v0) ** 4 - (s_star / s) ** 2)


def idm_partials(p: IdmParams, s: float, dv: float, v: float) -> Partials:
    if s <= 0:
        raise InvalidStateException(f"IDM queried at non-positive spacing {s}")
    sqrt_ab = math.sqrt(p.a * p.b)
    s_star = desired_gap(p, dv, v)
    beta1 = 2.0 * p.a * s_star**2 / s**3
    beta3 = -4.0 * p.a * v**3 / p.v0**4
    # the kink of max(0, .) takes the active branch
    if _gap_term(p, dv, v) >= 0:
        beta2 = p.a * s_star * v / (s**2 * sqrt_ab)
        beta3 -= 2.0 * p.a * s_star / s**2 * (p.T - dv / (2.0 * sqrt_ab))
    else:
        beta2 = 0.0
    return beta1, beta2, beta3


class IdmModel(CarFollowingModel):
    name = "idm"

    def __init__(self, params: IdmParams | None = None) -> None:
        super().__init__(params or IdmParams())

    def accel(self, s: float, dv: float, v: float, attacked: bool = False) -> float:
        return idm_accel(self.params, s, dv, v)

    def partials(
        self, s: float, dv: float, v: float, attacked: bool = False
    ) -> Partials:
        return idm_partials(self.params, s, dv, v)

    def equilibrium_spacing(self, v: float) -> float:
        p = self.params
        if not 0 <= v < p.v0:
            raise InvalidStateException(
                f"no IDM equilibrium spacing at speed {v} (desired speed {p.v0})"
            )
        return (p.s0 + v * p.T) / math.sqrt(1.0 - (v / p.v0) ** 4)

"""Optimal velocity with relative velocity model, used for ACC vehicles"""

from __future__ import annotations

from dataclasses import dataclass

from accsim.exception import InvalidStateException
from accsim.model.model import CarFollowingModel, Partials, check_positive


@dataclass(frozen=True)
class OvrvParams:
    k1: float = 0.02
    k2: float = 0.13
    eta: float = 21.51
    tau: float = 1.71
    length: float = 5.0

    def __post_init__(self) -> None:
        check_positive(self)


def ovrv_accel(p: OvrvParams, s: float, dv: float, v: float) -> float:
    # grouped so that the equilibrium spacing gives exactly zero
    return p.k1 * (s - (p.eta + p.tau * v)) + p.k2 * dv


class OvrvModel(CarFollowingModel):
    name = "ovrv"

    def __init__(self, params: OvrvParams | None = None) -> None:
        super().__init__(params or OvrvParams())

    def accel(self, s: float, dv: float, v: float, attacked: bool = False) -> float:
        return ovrv_accel(self.params, s, dv, v)

    def partials(
        self, s: float, dv: float, v: float, attacked: bool = False
    ) -> Partials:
        p = self.params
        return p.k1, p.k2, -p.tau * p.k1

    def equilibrium_spacing(self, v: float) -> float:
        if v < 0:
            raise InvalidStateException(f"no equilibrium spacing at speed {v}")
        return self.params.eta + self.params.tau * v

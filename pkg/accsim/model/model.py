"""Common functionality for car-following models."""

from __future__ import annotations

import abc
import dataclasses
import math
from typing import Any

from accsim.exception import ConfigurationException

Partials = tuple[float, float, float]


def check_positive(params: Any) -> None:
    """Raise ConfigurationException unless every field of the parameter
    dataclass is a finite, strictly positive number."""

    for fld in dataclasses.fields(params):
        value = getattr(params, fld.name)
        if not (isinstance(value, (int, float)) and math.isfinite(value)):
            raise ConfigurationException(
                f"{type(params).__name__}.{fld.name} must be a finite number, "
                f"got {value!r}"
            )
        if value <= 0:
            raise ConfigurationException(
                f"{type(params).__name__}.{fld.name} must be positive, got {value}"
            )


class CarFollowingModel(metaclass=abc.ABCMeta):
    """Base class for car-following models. A model gives the acceleration of
    a vehicle from its spacing s to the vehicle ahead, the relative speed
    dv = v_ahead - v and its own speed v."""

    name = None

    # accept zero sensitivity to spacing and relative speed
    relaxed_rationality = False

    def __init__(self, params: Any) -> None:
        self.params = params

    @property
    def length(self) -> float:
        return self.params.length

    def active_at(self, t: float | None) -> bool:
        """Return True if the model behaves differently at time t because of
        an attack. Plain models are never attacked."""
        return False

    @abc.abstractmethod
    def accel(self, s: float, dv: float, v: float, attacked: bool = False) -> float:
        """Raw, unclamped acceleration. The attacked flag selects the
        corrupted measurements for models that support attacks."""
        pass  # pragma: no cover

    @abc.abstractmethod
    def partials(
        self, s: float, dv: float, v: float, attacked: bool = False
    ) -> Partials:
        """Partial derivatives of the acceleration with respect to s, dv
        and v."""
        pass  # pragma: no cover

    @abc.abstractmethod
    def equilibrium_spacing(self, v: float) -> float:
        """Spacing at which the acceleration vanishes at speed v with dv = 0."""
        pass  # pragma: no cover

    def accel_at(self, s: float, dv: float, v: float, t: float) -> float:
        return self.accel(s, dv, v, attacked=self.active_at(t))

    def is_rational(
        self, s: float, dv: float, v: float, t: float | None = None
    ) -> bool:
        """Check the rational driving sign constraints at a state."""
        beta1, beta2, beta3 = rdc_partials(self, s, dv, v, t)
        if self.relaxed_rationality:
            return beta1 >= 0 and beta2 >= 0 and beta3 < 0
        return beta1 > 0 and beta2 > 0 and beta3 < 0


def rdc_partials(
    model: CarFollowingModel, s: float, dv: float, v: float, t: float | None = None
) -> Partials:
    """Return (beta1, beta2, beta3), the partial derivatives of the model
    acceleration with respect to spacing, relative speed and speed. Without
    a time, an attacked model is evaluated with its attack applied."""

    attacked = True if t is None else model.active_at(t)
    return model.partials(s, dv, v, attacked=attacked)


def equilibrium_spacing(model: CarFollowingModel, v: float) -> float:
    return model.equilibrium_spacing(v)

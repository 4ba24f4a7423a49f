"""Custom exceptions used by accsim"""

from __future__ import annotations

from typing import TYPE_CHECKING

from click import ClickException

if TYPE_CHECKING:
    from accsim.simulation import Trajectory


class AccsimException(ClickException):
    """Base accsim exception. We define this as a subclass of ClickException so
    that the CLI can automatically handle exceptions. This exception cannot be
    instantiated directly - subclasses should be used instead."""

    def __init__(
        self,
        message: str,
        scenario_id: str | None = None,
        vehicle_id: int | None = None,
    ) -> None:
        super().__init__(message)
        self.scenario_id = scenario_id
        self.vehicle_id = vehicle_id

        if self.prefix is None:
            raise TypeError("Cannot instantiate exception without a prefix.")

    # subclasses should set this to a descriptive prefix
    prefix = None

    def format_message(self) -> str:
        if self.scenario_id is not None:
            return "{} scenario '{}': {}".format(
                self.prefix, self.scenario_id, self.message
            )
        if self.vehicle_id is not None:
            return "{} vehicle {}: {}".format(
                self.prefix, self.vehicle_id, self.message
            )
        return "{}: {}".format(self.prefix, self.message)


class ConfigurationException(AccsimException):
    """Exception raised when a scenario or its settings are misconfigured."""

    prefix = "Misconfigured"


class ExpressionException(AccsimException):
    """Exception raised when an attack function string cannot be parsed. The
    byte offset of the offending input is kept in the offset attribute."""

    prefix = "Invalid attack expression"

    def __init__(self, message: str, source: str = "", offset: int = 0) -> None:
        super().__init__(f"{message} at offset {offset} in '{source}'")
        self.source = source
        self.offset = offset


class EvaluationException(AccsimException):
    """Exception raised when an attack function cannot be evaluated at a point,
    e.g. division by zero or overflow."""

    prefix = "Attack evaluation failed"

    def __init__(self, message: str, point: float | None = None) -> None:
        super().__init__(message)
        self.point = point


class InvalidStateException(AccsimException):
    """Exception raised when a model is queried at a physically invalid state,
    such as a collision state or a speed without an equilibrium spacing."""

    prefix = "Invalid state"
    exit_code = 3


class SimulationFailedException(AccsimException):
    """Exception raised when the integration of a scenario breaks down. The
    trajectory computed up to the failure is kept in the partial attribute."""

    prefix = "Simulation failed"
    exit_code = 3

    def __init__(
        self,
        message: str,
        partial: Trajectory | None = None,
        scenario_id: str | None = None,
    ) -> None:
        super().__init__(message, scenario_id=scenario_id)
        self.partial = partial


class InadmissibleAttackException(AccsimException):
    """Exception raised when a declared attack falls outside its stealthy
    admissible set."""

    prefix = "Inadmissible attack"
    exit_code = 2


class NotSupportedException(AccsimException):
    """Exception raised when an operation is not supported in the current
    installation."""

    prefix = "Not supported"

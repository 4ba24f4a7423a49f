"""False data injection attacks on the sensor measurements of an ACC
vehicle"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from accsim.dsl import Expr, differentiate, parse
from accsim.exception import ConfigurationException
from accsim.util import parse_window

# variable names of the spacing and relative speed channels
SPACING_VAR = "s"
SPEED_DIFF_VAR = "dv"


class AttackMode(enum.Enum):
    """How the attack functions corrupt the measurements: additive attacks
    report x + g(x), multiplicative attacks report x * g(x)."""

    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"

    @classmethod
    def from_name(cls, name: str) -> AttackMode:
        try:
            return cls(name.lower())
        except ValueError:
            modes = ", ".join(mode.value for mode in cls)
            raise ConfigurationException(
                f"unknown attack mode '{name}', expected one of: {modes}"
            )


@dataclass(frozen=True)
class AttackSpec:
    """Attack functions for the spacing channel (g1) and the relative speed
    channel (g2), their injection mode and the active time window. The
    derivatives are computed once at construction."""

    g1: Expr
    g2: Expr
    mode: AttackMode
    t_on: float
    t_off: float
    g1_source: str = ""
    g2_source: str = ""
    dg1: Expr = field(init=False, repr=False, compare=False)
    dg2: Expr = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.t_on < self.t_off:
            raise ConfigurationException(
                f"attack window [{self.t_on}, {self.t_off}] must satisfy "
                "0 <= t_on < t_off"
            )
        object.__setattr__(self, "dg1", differentiate(self.g1))
        object.__setattr__(self, "dg2", differentiate(self.g2))

    @classmethod
    def from_strings(
        cls,
        g1: str,
        g2: str,
        mode: AttackMode | str = AttackMode.ADDITIVE,
        window: Any = (50.0, 80.0),
    ) -> AttackSpec:
        if isinstance(mode, str):
            mode = AttackMode.from_name(mode)
        try:
            t_on, t_off = parse_window(window, "attack window")
        except ValueError as err:
            raise ConfigurationException(str(err))
        return cls(
            parse(g1, SPACING_VAR),
            parse(g2, SPEED_DIFF_VAR),
            mode,
            t_on,
            t_off,
            g1_source=g1,
            g2_source=g2,
        )

    @property
    def window(self) -> tuple[float, float]:
        return (self.t_on, self.t_off)

    def is_active(self, t: float) -> bool:
        """Return True if the attack is active at time t. The window is
        half-open: the attack starts at t_on and has ended at t_off."""
        return self.t_on <= t < self.t_off

    def as_dict(self) -> dict[str, Any]:
        return {
            "g1": self.g1_source or str(self.g1),
            "g2": self.g2_source or str(self.g2),
            "mode": self.mode.value,
            "window": [self.t_on, self.t_off],
        }

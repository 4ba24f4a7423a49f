"""Built-in scenarios: a ten vehicle platoon with one ACC vehicle behind the
leader and eight human-driven vehicles, unattacked or under the stock
attack cases"""

from __future__ import annotations

from typing import NamedTuple

from accsim.attack import AttackSpec
from accsim.config import ScenarioConfig
from accsim.scenario import Acc, Hdv, Leader, Scenario

ATTACK_WINDOW = (50.0, 80.0)

HDV_COUNT = 8


class Preset(NamedTuple):
    description: str
    g1: str | None = None
    g2: str | None = None
    mode: str = "additive"


PRESETS = {
    "baseline": Preset("no attack, every vehicle keeps the platoon speed"),
    "case1": Preset(
        "mild additive attack inside the admissible set",
        "0.1*sin(s) - 0.1*s",
        "0.1*sin(dv) - 0.1*dv",
    ),
    "case2": Preset(
        "moderate additive attack inside the admissible set",
        "0.4*sin(s) - 0.5*s",
        "0.4*sin(dv) - 0.5*dv",
    ),
    "case3": Preset(
        "strong linear additive attack inside the admissible set",
        "-0.9*s",
        "-0.9*dv",
    ),
    "case4": Preset(
        "overshooting linear attack, brings the ACC vehicle to a stop",
        "-2*s",
        "-2*dv",
    ),
    "case5": Preset(
        "spacing inflation attack leading to a rear-end collision",
        "10*s",
        "-5*dv",
    ),
    "case6": Preset(
        "oscillating spacing inflation attack leading to a rear-end collision",
        "sin(s) + 20*s",
        "sin(dv) - 20*dv",
    ),
    "example3": Preset(
        "multiplicative attack constructed to stay admissible",
        "1/s + 0.5",
        "1",
        "multiplicative",
    ),
}


def platoon(attack: AttackSpec | None = None, hdv_count: int = HDV_COUNT) -> tuple:
    """Leader, then the ACC vehicle carrying the attack, then the HDVs."""
    return (Leader(), Acc(attack=attack)) + tuple(Hdv() for _ in range(hdv_count))


def get_preset(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ValueError("No such preset {}".format(name))
    preset = PRESETS[name]
    attack = None
    if preset.g1 is not None:
        attack = AttackSpec.from_strings(
            preset.g1, preset.g2, preset.mode, ATTACK_WINDOW
        )
    return ScenarioConfig(Scenario(platoon(attack), name=name), preset=name)

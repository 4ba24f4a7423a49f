"""OVRV model acting on corrupted sensor measurements"""

from __future__ import annotations

from accsim.attack import AttackMode, AttackSpec
from accsim.dsl import evaluate
from accsim.model.model import Partials
from accsim.model.ovrv import OvrvModel, OvrvParams, ovrv_accel


def perceived(atk: AttackSpec, s: float, dv: float) -> tuple[float, float]:
    """Return the spacing and relative speed measurements as reported by the
    compromised sensors."""

    g1 = evaluate(atk.g1, s)
    g2 = evaluate(atk.g2, dv)
    if atk.mode is AttackMode.ADDITIVE:
        return s + g1, dv + g2
    return s * g1, dv * g2


def attacked_ovrv_accel(
    p: OvrvParams, atk: AttackSpec, s: float, dv: float, v: float, t: float
) -> float:
    if not atk.is_active(t):
        return ovrv_accel(p, s, dv, v)
    s_seen, dv_seen = perceived(atk, s, dv)
    return ovrv_accel(p, s_seen, dv_seen, v)


def attacked_partials(
    p: OvrvParams, atk: AttackSpec, s: float, dv: float
) -> Partials:
    dg1 = evaluate(atk.dg1, s)
    dg2 = evaluate(atk.dg2, dv)
    if atk.mode is AttackMode.ADDITIVE:
        return p.k1 * (1.0 + dg1), p.k2 * (1.0 + dg2), -p.tau * p.k1
    g1 = evaluate(atk.g1, s)
    g2 = evaluate(atk.g2, dv)
    return p.k1 * (g1 + s * dg1), p.k2 * (g2 + dv * dg2), -p.tau * p.k1


class AttackedOvrvModel(OvrvModel):
    """ACC vehicle whose spacing and relative speed sensors are corrupted by
    an attack while its window is active."""

    name = "attacked-ovrv"

    relaxed_rationality = True

    def __init__(self, params: OvrvParams | None, attack: AttackSpec) -> None:
        super().__init__(params)
        self.attack = attack

    def active_at(self, t: float | None) -> bool:
        return t is not None and self.attack.is_active(t)

    def accel(self, s: float, dv: float, v: float, attacked: bool = False) -> float:
        if not attacked:
            return ovrv_accel(self.params, s, dv, v)
        s_seen, dv_seen = perceived(self.attack, s, dv)
        return ovrv_accel(self.params, s_seen, dv_seen, v)

    def partials(
        self, s: float, dv: float, v: float, attacked: bool = False
    ) -> Partials:
        if not attacked:
            return super().partials(s, dv, v)
        return attacked_partials(self.params, self.attack, s, dv)

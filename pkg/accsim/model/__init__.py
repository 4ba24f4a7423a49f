"""Registry of car-following model types for accsim"""

from __future__ import annotations

from typing import TYPE_CHECKING, Type

if TYPE_CHECKING:
    from accsim.model.model import CarFollowingModel


# define functions for lazily importing each model (alphabetical order)
def _attacked_ovrv() -> Type[CarFollowingModel]:
    from . import attacked

    return attacked.AttackedOvrvModel


def _idm() -> Type[CarFollowingModel]:
    from . import idm

    return idm.IdmModel


def _ovrv() -> Type[CarFollowingModel]:
    from . import ovrv

    return ovrv.OvrvModel


# registry of the above functions
_model_fns = {
    "attacked-ovrv": _attacked_ovrv,
    "idm": _idm,
    "ovrv": _ovrv,
}


def get_model_type(model_id: str) -> Type[CarFollowingModel]:
    if model_id in _model_fns:
        return _model_fns[model_id]()
    else:
        raise ValueError("No such model type {}".format(model_id))

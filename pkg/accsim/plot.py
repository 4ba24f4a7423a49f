"""SVG charts of the speed and displacement profiles. Needs the optional
matplotlib dependency."""

from __future__ import annotations

import os.path
from typing import TYPE_CHECKING

from accsim.exception import NotSupportedException
from accsim.util import atomic_save

if TYPE_CHECKING:
    from accsim.simulation import Trajectory

PROFILES = {
    "speed": ("speed.svg", "Speed (m/s)"),
    "position": ("displacement.svg", "Displacement (m)"),
}


def _pyplot():
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise NotSupportedException(
            "matplotlib not available, cannot write SVG charts "
            "(install the 'plot' extra)"
        )
    return plt


def _save_figure(fig, path: str) -> None:
    fig.savefig(path, format="svg")


def write_profile(traj: Trajectory, dirname: str, quantity: str) -> str:
    """Draw one line per vehicle of the given quantity against time, with
    the attack windows shaded."""

    plt = _pyplot()
    filename, label = PROFILES[quantity]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    data = getattr(traj, quantity)
    for idx in range(traj.n_vehicles):
        ax.plot(traj.time, data[:, idx], linewidth=1.0, label=f"#{idx + 1}")
    for t_on, t_off in traj.attack_windows.values():
        ax.axvspan(t_on, t_off, color="tab:red", alpha=0.1)
    ax.set_xlabel("Time (s)")
    ax.set_ylabel(label)
    ax.legend(ncol=5, fontsize="small")
    fig.tight_layout()
    try:
        atomic_save(fig, dirname, filename, _save_figure)
    finally:
        plt.close(fig)
    return os.path.join(dirname, filename)


def write_profiles(traj: Trajectory, dirname: str) -> list[str]:
    return [write_profile(traj, dirname, quantity) for quantity in PROFILES]

"""Registry that keeps track of the available scenarios"""

from __future__ import annotations

import os

from flask import Flask, current_app

import accsim
from accsim.config import ScenarioConfig, load_config, scenario_files
from accsim.presets import PRESETS, get_preset

logger = accsim.logger


class ScenarioRegistry:
    """Class that keeps track of the built-in presets and the scenario files
    found in the configured scenarios directory. Names resolve to presets
    first."""

    def __init__(self, scenarios_path: str | None) -> None:
        self._scenarios_path = scenarios_path
        self._files = None

    def _scenario_files(self) -> dict[str, str]:
        if self._files is None:
            path = self._scenarios_path
            if path and os.path.isdir(path):
                self._files = scenario_files(path)
            else:
                if path:
                    logger.warning(f'Scenario directory "{path}" is missing.')
                self._files = {}
        return self._files

    def get_scenarios(self) -> dict[str, str]:
        """Return a dict of scenario name -> description or file path"""

        scenarios = {name: preset.description for name, preset in PRESETS.items()}
        for name, path in self._scenario_files().items():
            scenarios.setdefault(name, path)
        return scenarios

    def get_scenario(self, name: str) -> ScenarioConfig:
        """Resolve a preset name, a scenario name in the scenarios directory or
        a path to a scenario file."""

        if name in PRESETS:
            return get_preset(name)
        files = self._scenario_files()
        if name in files:
            return load_config(files[name])
        if os.path.isfile(name):
            return load_config(name)
        raise ValueError(f"No such scenario '{name}'")


def initialize_scenarios(app: Flask) -> None:
    app.accsim_registry = ScenarioRegistry(app.config["SCENARIOS_PATH"])


def get_registry() -> ScenarioRegistry:
    if not hasattr(current_app, "accsim_registry"):
        initialize_scenarios(current_app)
    return current_app.accsim_registry


def get_scenarios() -> dict[str, str]:
    return get_registry().get_scenarios()


def get_scenario(name: str) -> ScenarioConfig:
    return get_registry().get_scenario(name)

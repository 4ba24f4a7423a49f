"""Parallel processing functionality for accsim"""

from __future__ import annotations

import multiprocessing
import multiprocessing.dummy
from typing import TYPE_CHECKING

import accsim
from accsim.exception import AccsimException, ConfigurationException
from accsim.metrics import load_coefficients
from accsim.run import RunSummary, run, scenario_digest

if TYPE_CHECKING:
    from typing import Callable

    from accsim.config import ScenarioConfig
    from accsim.metrics import VtMicroCoefficients

logger = accsim.logger

# Start method for processes created by the multiprocessing module.
# A value of None means using the platform-specific default.
# Intended to be overridden in unit tests.
MP_START_METHOD = None


class ScenarioRunMap:
    """A utility class that wraps the settings shared by every run of a
    batch and provides a mapping method from a ScenarioConfig to its
    RunSummary. Intended to be used with the multiprocessing module."""

    def __init__(
        self,
        output_dir: str | None,
        coefficients: VtMicroCoefficients | None,
        svg: bool,
    ) -> None:
        self.output_dir = output_dir
        self.coefficients = coefficients
        self.svg = svg

    def run(self, cfg: ScenarioConfig) -> RunSummary:
        try:
            return run(cfg, self.output_dir, self.coefficients, self.svg)
        except AccsimException as err:
            # failures of one run must not stop the batch
            logger.error(err.format_message())
            return RunSummary(
                scenario=cfg.name,
                digest=scenario_digest(cfg),
                error=err.format_message(),
            )


def get_pool(n_jobs: int) -> tuple[int | None, Callable]:
    """return a suitable constructor for multiprocessing pool class, and the correct
    jobs argument for it, for the given amount of parallel jobs"""

    ctx = multiprocessing.get_context(MP_START_METHOD)

    if n_jobs < 1:
        n_jobs = None
        pool_constructor: Callable = ctx.Pool
    elif n_jobs == 1:
        # use the dummy wrapper around threading to avoid subprocess overhead
        pool_constructor = multiprocessing.dummy.Pool
    else:
        pool_constructor = ctx.Pool

    return n_jobs, pool_constructor


def batch(
    configs: list[ScenarioConfig],
    output_dir: str | None = None,
    jobs: int = 1,
    coefficients: VtMicroCoefficients | None = None,
    svg: bool = False,
) -> list[RunSummary]:
    """Run the scenarios with up to jobs parallel workers. The summaries are
    returned in the order of the input."""

    if not configs:
        return []
    names = [cfg.name for cfg in configs]
    duplicates = {name for name in names if names.count(name) > 1}
    if duplicates and output_dir is not None:
        raise ConfigurationException(
            f"batch contains duplicate scenario names: {sorted(duplicates)}"
        )
    coefficients = coefficients or load_coefficients()
    run_map = ScenarioRunMap(output_dir, coefficients, svg)
    jobs, pool_class = get_pool(jobs)
    logger.info(f"running {len(configs)} scenario(s) with {jobs or 'all'} job(s)")
    with pool_class(jobs) as pool:
        return pool.map(run_map.run, configs)

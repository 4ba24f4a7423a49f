"""Utility functions for accsim CLI commands"""

from __future__ import annotations

import collections
import sys
from typing import TYPE_CHECKING

import click
import click_log
from flask import current_app

import accsim
import accsim.registry
from accsim.metrics import load_coefficients

if TYPE_CHECKING:
    from click.core import Argument, Context, Option

    from accsim.config import ScenarioConfig
    from accsim.metrics import VtMicroCoefficients
    from accsim.validate import AdmissibilityReport

logger = accsim.logger


def _set_scenarios_path(ctx: Context, param: Option, value: str | None) -> None:
    """Override the default path or the path given in env by CLI option"""
    with ctx.obj.load_app().app_context():
        if value:
            current_app.config["SCENARIOS_PATH"] = value


def common_options(f):
    """Decorator to add common options for all CLI commands"""
    f = click.option(
        "-s",
        "--scenarios",
        help="Set path to a directory of scenario files",
        type=click.Path(dir_okay=True, file_okay=False, exists=True),
        callback=_set_scenarios_path,
        expose_value=False,
        is_eager=True,
    )(f)
    return click_log.simple_verbosity_option(logger)(f)


def scenario_names(f):
    """Decorator to add scenario name or path arguments to a CLI command"""
    return click.argument(
        "names", nargs=-1, required=True, shell_complete=complete_param
    )(f)


def scenario_name(f):
    """Decorator to add a single scenario name or path argument"""
    return click.argument("name", shell_complete=complete_param)(f)


def dt_option(f):
    """Decorator to add an option overriding the integration step"""
    return click.option(
        "--dt",
        type=click.FloatRange(min=0, min_open=True),
        default=None,
        help="Override the integration step size in seconds",
    )(f)


def output_option(f):
    """Decorator to add an option for the output directory"""
    return click.option(
        "--output",
        "-o",
        type=click.Path(file_okay=False),
        default=None,
        help="Directory for the run outputs (default: OUTPUT_DIR setting)",
    )(f)


def svg_option(f):
    return click.option(
        "--svg/--no-svg",
        default=None,
        help="Write speed and displacement charts as SVG (needs matplotlib)",
    )(f)


def get_scenario(name: str, dt: float | None = None) -> ScenarioConfig:
    """
    Helper function to get a scenario by name or path and bail out if it
    doesn't exist"""
    try:
        cfg = accsim.registry.get_scenario(name)
    except ValueError:
        click.echo(f"No scenario found with the name or path '{name}'.", err=True)
        sys.exit(1)
    if dt is not None:
        cfg = cfg.with_dt(dt)
    return cfg


def get_output_dir(output: str | None) -> str:
    return output or current_app.config["OUTPUT_DIR"]


def get_coefficients() -> VtMicroCoefficients:
    return load_coefficients(current_app.config["VT_MICRO_COEFFICIENTS"])


def use_svg(cfg: ScenarioConfig | None, svg: bool | None) -> bool:
    """The command line flag wins over the scenario setting, which wins over
    the WRITE_SVG setting."""
    if svg is not None:
        return svg
    if cfg is not None and cfg.svg is not None:
        return cfg.svg
    return bool(current_app.config["WRITE_SVG"])


def make_list_template(*rows) -> str:
    """Helper function to create a template for a list of entries with fields of
    variable width. The width of each field is determined by the longest item in the
    field in the given rows."""

    max_field_widths = collections.defaultdict(int)
    for row in rows:
        for field_ind, item in enumerate(row):
            max_field_widths[field_ind] = max(max_field_widths[field_ind], len(item))

    return "  ".join(
        [
            f"{{{field_ind}: <{field_width}}}"
            for field_ind, field_width in max_field_widths.items()
        ]
    )


def show_table(column_headings: tuple[str, ...], table: list[tuple[str, ...]]) -> None:
    template = make_list_template(column_headings, *table)
    header = template.format(*column_headings)
    click.echo(header)
    click.echo("-" * len(header))
    for row in table:
        click.echo(template.format(*row))


def show_report(vehicle_id: int, report: AdmissibilityReport) -> None:
    """Print an admissibility report with one line per channel and the
    listed violations."""

    click.echo(
        f"Vehicle {vehicle_id}: {report.verdict.value} "
        f"(set {report.tested_set}{', strict' if report.strict else ''})"
    )
    for channel in report.channels:
        if channel.minimum is None:
            span = "no finite values"
        else:
            span = f"range [{channel.minimum:.6g}, {channel.maximum:.6g}]"
        click.echo(f"  {channel.quantity:<12} {channel.verdict.value:<13} {span}")
        if channel.failing_point is not None:
            click.echo(
                f"    cannot evaluate at {channel.variable} = "
                f"{channel.failing_point:.6g}"
            )
        for x, value in channel.violations:
            click.echo(f"    violated at {channel.variable} = {x:.6g}: {value:.6g}")
        hidden = channel.violation_count - len(channel.violations)
        if hidden > 0:
            click.echo(f"    ... and {hidden} more")


def _get_completion_choices(param: Argument) -> dict[str, str] | list:
    if param.name in ("name", "names"):
        return accsim.registry.get_scenarios()
    else:
        return []


def complete_param(ctx: Context, param: Argument, incomplete: str) -> list[str]:
    with ctx.obj.load_app().app_context():
        return [
            choice
            for choice in _get_completion_choices(param)
            if choice.startswith(incomplete)
        ]

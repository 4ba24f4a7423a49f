"""Definitions for command-line (Click) commands for invoking accsim
operations and printing the results to console."""

import json
import os.path
import sys

import click
import click_log
from flask import current_app
from flask.cli import FlaskGroup

import accsim
import accsim.parallel
import accsim.registry
import accsim.run
from accsim import cli_util
from accsim.config import dump_config
from accsim.exception import InadmissibleAttackException
from accsim.util import format_number
from accsim.validate import Verdict, check_rationality

logger = accsim.logger
click_log.basic_config(logger)

# exit code for failed simulations, shared with SimulationFailedException
EXIT_SIMULATION_FAILED = 3


class AccsimGroup(FlaskGroup):
    """FlaskGroup that reports command line usage errors with exit code 1,
    keeping exit code 2 for inadmissible attacks."""

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as err:
            err.exit_code = 1
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as err:
            err.exit_code = 1
            raise


create_app = accsim.create_app
cli = AccsimGroup(
    create_app=create_app, add_default_commands=False, add_version_option=False
)
cli = click.version_option(message="%(version)s")(cli)
cli.params = [opt for opt in cli.params if opt.name not in ("env_file", "app")]


@cli.command("presets")
@cli_util.common_options
def run_presets():
    """
    List the available scenarios.
    \f
    Shows the built-in presets (the baseline platoon and the stock attack
    cases) followed by the scenario files found in the scenarios directory.
    """

    column_headings = ("Scenario", "Description")
    table = list(accsim.registry.get_scenarios().items())
    cli_util.show_table(column_headings, table)


@cli.command("dump-config")
@cli_util.scenario_name
@click.option(
    "--output",
    "-o",
    type=click.File("w", encoding="utf-8", atomic=True, lazy=True),
    default="-",
    help="""Write the scenario to the given file instead of standard output""",
)
@cli_util.dt_option
@cli_util.common_options
def run_dump_config(name, output, dt):
    """
    Write a scenario as canonical JSON.
    \f
    The output can be edited and loaded again by giving its path in place of
    a scenario name.
    """

    cfg = cli_util.get_scenario(name, dt)
    output.write(dump_config(cfg))


@cli.command("validate")
@cli_util.scenario_name
@click.option(
    "--strict",
    is_flag=True,
    help="Reject additive attacks with a derivative of exactly -1",
)
@click.option(
    "--rdc",
    is_flag=True,
    help="Also check the rational driving constraints of the attacked model",
)
@cli_util.common_options
def run_validate(name, strict, rdc):
    """
    Check whether the attacks of a scenario are stealthy.
    \f
    Each attack is tested against its admissible set over the measurement
    domain of the scenario, without simulating. Exits with status 2 if any
    attack is inadmissible.
    """

    cfg = cli_util.get_scenario(name)
    reports = accsim.run.validate_only(cfg, strict=strict)
    if not reports:
        click.echo(f"Scenario '{cfg.name}': no attacks declared")
        return
    inadmissible = []
    for vehicle_id, report in reports.items():
        cli_util.show_report(vehicle_id, report)
        if report.verdict is Verdict.INADMISSIBLE:
            inadmissible.append(vehicle_id)
        if rdc:
            atk = cfg.scenario.vehicle(vehicle_id).attack
            params = cfg.scenario.vehicle(vehicle_id).params
            rdc_report = check_rationality(atk, cfg.domain, params)
            cli_util.show_report(vehicle_id, rdc_report)
            if rdc_report.verdict is Verdict.INADMISSIBLE:
                inadmissible.append(vehicle_id)
    if inadmissible:
        raise InadmissibleAttackException(
            f"attack on vehicle(s) {sorted(set(inadmissible))} of scenario "
            f"'{cfg.name}' is not stealthy"
        )


@cli.command("run")
@cli_util.scenario_name
@cli_util.dt_option
@cli_util.output_option
@cli_util.svg_option
@click.option(
    "--json", "as_json", is_flag=True, help="Print the summary as JSON"
)
@cli_util.common_options
def run_run(name, dt, output, svg, as_json):
    """
    Simulate a scenario and report its metrics.
    \f
    Writes trajectory.csv, speed.csv, displacement.csv and summary.json into
    a directory named after the scenario under the output directory. The
    unattacked counterpart is simulated as well, for the fuel comparison.
    """

    cfg = cli_util.get_scenario(name, dt)
    summary = accsim.run.run(
        cfg,
        cli_util.get_output_dir(output),
        cli_util.get_coefficients(),
        cli_util.use_svg(cfg, svg),
    )
    if as_json:
        click.echo(json.dumps(summary.as_dict(), indent=2))
    else:
        click.echo(summary.format())
    if summary.failed:
        sys.exit(EXIT_SIMULATION_FAILED)


def _batch_row(summary: accsim.run.RunSummary) -> tuple[str, ...]:
    verdicts = sorted({report.verdict.value for report in summary.verdicts.values()})
    metrics = summary.metrics
    if summary.failed:
        status = "failed"
    elif summary.collisions:
        status = f"{len(summary.collisions)} collision(s)"
    else:
        status = "ok"
    if metrics is None:
        return (summary.scenario, ",".join(verdicts) or "-", "-", "-", "-", status)
    pct = metrics.pct_fleet_avg_fuel
    return (
        summary.scenario,
        ",".join(verdicts) or "-",
        format_number(metrics.asv),
        format_number(metrics.fleet_avg_fuel),
        "-" if pct is None else f"{pct:+.3f}",
        status,
    )


@cli.command("batch")
@cli_util.scenario_names
@cli_util.dt_option
@cli_util.output_option
@cli_util.svg_option
@click.option(
    "--jobs",
    "-j",
    default=None,
    type=int,
    help="Number of parallel jobs (0 means all CPUs, default: DEFAULT_JOBS)",
)
@cli_util.common_options
def run_batch(names, dt, output, svg, jobs):
    """
    Run several scenarios and tabulate their metrics.
    \f
    Scenarios are independent and can run in parallel; the results do not
    depend on the number of jobs. Exits with status 3 if any run failed.
    """

    configs = [cli_util.get_scenario(name, dt) for name in names]
    if jobs is None:
        jobs = current_app.config["DEFAULT_JOBS"]
    summaries = accsim.parallel.batch(
        configs,
        cli_util.get_output_dir(output),
        jobs,
        cli_util.get_coefficients(),
        cli_util.use_svg(None, svg),
    )

    column_headings = ("Scenario", "Verdict", "ASV", "Fuel (L)", "Fuel %", "Status")
    table = [_batch_row(summary) for summary in summaries]
    cli_util.show_table(column_headings, table)
    output_dir = os.path.abspath(cli_util.get_output_dir(output))
    click.echo(f"Outputs written to {output_dir}")
    if any(summary.failed for summary in summaries):
        sys.exit(EXIT_SIMULATION_FAILED)


if __name__ == "__main__":
    cli()

"""
Command-line entry point.

    gaussons <command> [--config PATH] [--out DIR] [--set key=value ...] [--verbose]

Exit codes: 0 when every check passed, 1 when a tolerance check failed or
a run aborted, 2 on a configuration or regime error.
"""

import logging
from typing import Optional, Tuple

import click

from gaussons.config import dump_config, load_config
from gaussons.core.errors import (
    ConfigError,
    GaussonsError,
    GridResolutionError,
    RegimeError,
)
from gaussons.experiments import COMMANDS, ExperimentRunner
from gaussons.models.data_models import ExperimentReport
from gaussons.reporting import write_report

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

HELP = {
    "gausson-check": "Build the Gaussons and check stationarity, masses and energies.",
    "phase-portrait": "Integrate tau orbits and classify a grid of initial data.",
    "instability-translate": "Track a shifted Gausson with the exact translation flow.",
    "instability-gaussian": "Fit departure rates of Gaussian solutions near fixed points.",
    "dispersion": "Measure exponential dispersion when no Gausson exists.",
    "nehari-witness": "Scan Gaussian witnesses of shrinking mass on the Nehari manifold.",
    "invariance-check": "Check every invariance against the split-step solver.",
}


def configure_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def run_command(
    command: str,
    config_path: Optional[str] = None,
    out_dir: Optional[str] = None,
    overrides: Tuple[str, ...] = (),
) -> int:
    """
    Load the configuration, run one command and write its report.

    Returns:
        int: The process exit code
    """
    try:
        cfg = load_config(config_path, overrides)
    except ConfigError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_CONFIG

    target_root = out_dir or cfg.output_dir
    try:
        report = ExperimentRunner(cfg).run(command)
    except (ConfigError, RegimeError, GridResolutionError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_CONFIG
    except GaussonsError as e:
        logger.error(f"[cli] {command} aborted: {e}")
        report = _aborted(command, e)

    target = write_report(report, target_root, cfg)
    status = "pass" if report.passed else "fail"
    click.echo(f"{command}: {status} ({target})")
    return EXIT_PASS if report.passed else EXIT_FAIL


def _aborted(command: str, error: GaussonsError) -> ExperimentReport:
    """Failing report for a run stopped by a runtime error."""
    summary = {"error": type(error).__name__, "message": " ".join(str(error).split())}
    for attr in ("time", "fraction", "drift", "horizon"):
        if getattr(error, attr, None) is not None:
            summary[f"error_{attr}"] = getattr(error, attr)
    return ExperimentReport(command=command, passed=False, summary=summary)


def _command(name: str) -> click.Command:
    @click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level.")
    @click.option(
        "--set",
        "overrides",
        multiple=True,
        metavar="KEY=VALUE",
        help="Override a configuration key; repeatable.",
    )
    @click.option(
        "--out",
        "out_dir",
        type=click.Path(file_okay=False),
        default=None,
        help="Output root (default: output_dir of the configuration).",
    )
    @click.option(
        "--config",
        "config_path",
        type=click.Path(dir_okay=False),
        default=None,
        help="key = value configuration file.",
    )
    @click.pass_context
    def command(
        ctx: click.Context,
        config_path: Optional[str],
        out_dir: Optional[str],
        overrides: Tuple[str, ...],
        verbose: bool,
    ) -> None:
        configure_logging(verbose)
        ctx.exit(run_command(name, config_path, out_dir, overrides))

    return click.command(name=name, help=HELP[name])(command)


@click.group()
def main() -> None:
    """Gaussons of the logarithmic Schrodinger equation: experiments."""


for _name in COMMANDS:
    main.add_command(_command(_name))


@main.command(name="show-config")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE")
@click.pass_context
def show_config(
    ctx: click.Context, config_path: Optional[str], overrides: Tuple[str, ...]
) -> None:
    """Print the resolved configuration in file format."""
    try:
        cfg = load_config(config_path, overrides)
    except ConfigError as e:
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_CONFIG)
    click.echo(dump_config(cfg), nl=False)


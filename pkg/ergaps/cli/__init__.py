"""Command-line Interface for ErGaps."""

from pathlib import Path

import click

from ergaps import conf
from ergaps.actions import App

from .base import ErGapsGroup, ProgressUI, auto_add_commands, turn_on_logging


@click.group(cls=ErGapsGroup)
@click.option("--config-file", "config_path", default=None, help=f"Configuration file. (Default: {conf.CONFIG_FILE})")
@click.option("--debug/--no-debug", default=None, help="Enable/disable debugging output.")
@click.option("--seed", type=int, default=None, help="Seed for every random stream. Recorded in each report.")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Number of worker threads.")
@click.option(
    "--format",
    type=click.Choice(conf.FORMATS),
    default=None,
    help="Output format of reports. Defaults to json.",
)
@click.option(
    "--sieve-budget",
    type=click.IntRange(min=2),
    default=None,
    help="The largest limit that a sieve table may be built for.",
)
@click.option("--progress", is_flag=True, default=False, help="Report progress of long computations on stderr.")
@click.pass_context
def ergaps(ctx, config_path, debug, seed, workers, format, sieve_budget, progress):
    """
    Explicit constants and desk-scale checks for gaps between products of r distinct primes.

    Every report is written to stdout, and logging (and progress) goes to stderr.
    """
    settings = conf.Settings()
    config_file = Path(config_path or conf.CONFIG_FILE).expanduser()
    user_set_config_file = bool(config_path)

    if user_set_config_file and not config_file.exists():
        # Only take issue with the config file not existing when the user
        # has set something.
        ctx.fail(f"File does not exist: {config_file}")

    if config_file.exists():
        try:
            settings = conf.Settings.load(config_file)
        except ValueError as error:
            ctx.fail(f"Invalid configuration file {config_file}: {error}")

    if debug is not None:
        settings.debug = debug

    if seed is not None:
        settings.seed = seed

    if workers is not None:
        settings.workers = workers

    if format:
        settings.format = format

    if sieve_budget is not None:
        settings.sieve_options.budget = sieve_budget

    turn_on_logging(settings.debug)

    if progress:
        ProgressUI()

    ctx.obj = App(settings)


auto_add_commands(ergaps, package=__name__)

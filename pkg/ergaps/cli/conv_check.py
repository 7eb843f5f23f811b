"""Command: conv-check."""

import click

from ergaps.actions import App

from .base import INT_INTERVAL, emit, pass_app, spec_option


@click.command(name="conv-check")
@click.option("--X", "X", type=int, required=True, help="Check every n up to X.")
@spec_option
@click.option(
    "--range",
    "ranges",
    type=INT_INTERVAL,
    multiple=True,
    required=True,
    help="LO:HI range of one of the first r-1 prime factors. Repeat once per factor.",
)
@click.option("--last-range", type=INT_INTERVAL, required=True, help="LO:HI range of the r-th prime factor.")
@click.option("--c", "c", type=int, default=None, help="The multiplicity (computed from the ranges by default).")
@pass_app
def conv_check(app: App, X, spec, ranges, last_range, c):
    """
    Check the convolution identity beta_(r-1) * 1_(P_r) = c beta_r up to X.

    Differences are only allowed at n divisible by the square of a prime of the
    last range. The dyadic splitting identity is checked as well.
    """
    inputs = {
        "X": X,
        "spec": str(spec),
        "ranges": [list(interval) for interval in ranges],
        "last_range": list(last_range),
        "c": c,
    }
    emit(app, "conv-check", inputs, app.conv_check(X, spec, list(ranges), last_range, c=c))

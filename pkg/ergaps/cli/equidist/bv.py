"""Command: equidist bv."""

import click

from ergaps.actions import App

from ..base import emit, pass_app, spec_option


@click.command()
@click.option(
    "--x",
    "xs",
    type=int,
    multiple=True,
    required=True,
    help="Count primes up to x. Repeat to get the relative error for several x.",
)
@click.option("--theta", type=float, default=0.25, show_default=True, help="Moduli go up to x^theta.")
@spec_option
@pass_app
def bv(app: App, xs, theta, spec):
    """
    Sum the Siegel-Walfisz errors over the moduli q <= x^theta coprime to B.

    With one --x the per-q terms are reported (one row per q for csv). With
    several, the relative error for each x is reported.
    """
    inputs = {"x": list(xs), "theta": theta, "spec": str(spec)}
    if len(xs) == 1:
        report = app.bv(xs[0], theta, spec)
        rows = [("q", "error")] + sorted(report.terms.items())
        emit(app, "equidist bv", inputs, report, rows=rows)
    else:
        decay = app.decay(list(xs), theta, spec)
        rows = [("x", "sum", "main_term", "ratio")] + [
            (item["x"], item["sum"], item["main_term"], item["ratio"]) for item in decay
        ]
        emit(app, "equidist bv", inputs, {"decay": decay}, rows=rows)

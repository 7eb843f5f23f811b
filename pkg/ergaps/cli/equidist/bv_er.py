"""Command: equidist bv-er."""

import click

from ergaps.actions import App

from ..base import EXPONENT_INTERVAL, emit, pass_app, spec_option


@click.command(name="bv-er")
@click.option("--N", "N", type=int, required=True, help="The size parameter N.")
@click.option("--u", "u", type=float, default=1.0, show_default=True, help="Only n < N^u are counted.")
@click.option("--r", "r", type=int, default=2, show_default=True, help="The number of prime factors.")
@click.option(
    "--range",
    "ranges",
    type=EXPONENT_INTERVAL,
    multiple=True,
    required=True,
    help="A:B exponent range (N^A <= p_i <= N^B) for one prime factor. Repeat once per factor.",
)
@click.option(
    "--theta-exponent",
    type=float,
    default=0.25,
    show_default=True,
    help="Moduli go up to (N^u)^theta_exponent.",
)
@spec_option
@pass_app
def bv_er(app: App, N, u, r, ranges, theta_exponent, spec):
    """Sum the equidistribution errors of the products of r primes from the given ranges."""
    inputs = {
        "N": N,
        "u": u,
        "r": r,
        "ranges": [list(interval) for interval in ranges],
        "theta_exponent": theta_exponent,
        "spec": str(spec),
    }
    report = app.bv_er(N, u, r, list(ranges), spec, theta_exponent)
    rows = [("q", "error")] + sorted(report.terms.items())
    emit(app, "equidist bv-er", inputs, report, rows=rows)

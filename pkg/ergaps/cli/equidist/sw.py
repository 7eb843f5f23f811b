"""Command: equidist sw."""

import click

from ergaps.actions import App

from ..base import emit, pass_app, spec_option


@click.command()
@click.option("--x", "x", type=int, required=True, help="Count primes up to x.")
@click.option("--q", "q", type=int, required=True, help="The modulus, coprime to B.")
@spec_option
@pass_app
def sw(app: App, x, q, spec):
    """Print the largest error of pi_P(x; q, a) against pi_P(x)/phi(q) over (a, q) = 1."""
    emit(app, "equidist sw", {"x": x, "q": q, "spec": str(spec)}, app.sw(x, q, spec))

"""Commands: constants, example-c."""

import click

from ergaps.actions import App

from .base import emit, pass_app


@click.command()
@click.option("--r", "r", type=int, required=True, help="The number of prime factors.")
@click.option("--m", "m", type=int, required=True, help="The number of E_r numbers wanted in a bounded window.")
@click.option("--delta", type=float, required=True, help="The density of the prime set, in (0, 1].")
@click.option("--B", "B", type=int, default=1, show_default=True, help="The squarefree exceptional modulus.")
@click.option("--theta", type=float, default=0.5, show_default=True, help="The level of distribution, in (0, 1/2].")
@click.option(
    "--k",
    "k",
    type=int,
    default=None,
    help=(
        "Evaluate at this tuple size instead of the smallest k above the "
        "threshold. A warning is logged if it is below the threshold."
    ),
)
@pass_app
def constants(app: App, r, m, delta, B, theta, k):
    """Evaluate every explicit constant for r, m, delta, B and theta."""
    inputs = {"r": r, "m": m, "delta": delta, "B": B, "theta": theta, "k": k}
    emit(app, "constants", inputs, app.constants(r, m, delta, B, theta, k=k))


@click.command(name="example-c")
@click.option("--m", "m", type=int, default=2, show_default=True, help="The number of E_2 numbers in the window.")
@pass_app
def example_c(app: App, m):
    """Evaluate the class group example: k and the window C(m) for primes p = 1 (mod 8)."""
    emit(app, "example-c", {"m": m}, app.example_c(m))

"""Command: functional."""

import click

from ergaps.actions import App
from ergaps.functional import Method, Sampler

from .base import emit, pass_app


@click.command(name="functional")
@click.option("--k", "k", type=int, required=True, help="The tuple size (the dimension of the integrals).")
@click.option("--r", "r", type=int, default=2, show_default=True, help="The number of prime factors.")
@click.option("--theta", type=float, default=0.5, show_default=True, help="The level of distribution.")
@click.option("--A", "A", type=float, default=None, help="Override A (defaults to log(k)/r).")
@click.option(
    "--method",
    type=click.Choice([m.value for m in Method]),
    default=Method.QUADRATURE.value,
    show_default=True,
    help="Nested adaptive quadrature (k <= 4) or seeded Monte Carlo.",
)
@click.option(
    "--budget",
    type=int,
    default=None,
    help="Subdivision limit for quadrature, or sample count for Monte Carlo. Defaults come from the settings.",
)
@click.option(
    "--sampler",
    type=click.Choice([s.value for s in Sampler]),
    default=Sampler.IMPORTANCE.value,
    show_default=True,
    help="The Monte Carlo sampling density.",
)
@click.option("--seed", type=int, default=None, help="Seed for the Monte Carlo streams. Overrides the global --seed.")
@pass_app
def functional_cmd(app: App, k, r, theta, A, method, budget, sampler, seed):
    """Evaluate I_k, the sum of the J_k^(m) and their ratio for the product test function."""
    if seed is not None:
        app.settings.seed = seed

    inputs = {"k": k, "r": r, "theta": theta, "A": A, "method": method, "budget": budget, "sampler": sampler}
    emit(app, "functional", inputs, app.functional(k, r, theta, A=A, method=method, budget=budget, sampler=sampler))

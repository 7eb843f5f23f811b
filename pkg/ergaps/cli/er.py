"""Commands: er, gaps, tn."""

from pathlib import Path

import click

from ergaps import errors, explorer
from ergaps.actions import App

from .base import emit, pass_app, spec_option, write_lines


@click.command()
@click.option("--r", "r", type=int, required=True, help="The number of distinct prime factors.")
@click.option("--X", "X", type=int, default=None, help="Enumerate up to X (plain mode).")
@spec_option
@click.option("--N", "N", type=int, default=None, help="Constrained mode: enumerate E_h numbers up to 2N.")
@click.option("--eta", type=float, default=None, help="Constrained mode: the smallest factor is at least N^eta.")
@click.option("--h", "h", type=int, default=None, help="Constrained mode: the number of prime factors.")
@click.option(
    "--output",
    "-o",
    default=None,
    help="Write the list to this file and print a summary instead of the list.",
)
@pass_app
def er(app: App, r, X, spec, N, eta, h, output):
    """
    Enumerate the products of r distinct primes of the prime set, one per line.

    With --N, --eta and --h, the numbers up to 2N with h prime factors, the
    smallest at least N^eta and the largest at least N^(1/2), are listed instead.
    """
    constrained = any(value is not None for value in (N, eta, h))
    if X is None:
        if not constrained:
            raise click.UsageError("Give --X, or all of --N, --eta and --h.")
        X = 2 * N
    cfg = explorer.ErConfig(r=r, X=X, spec=spec, N=N, eta=eta, h=h)
    values = app.enumerate_er(cfg)
    if output:
        write_lines(values, output)
        inputs = {"r": r, "X": X, "spec": str(spec), "N": N, "eta": eta, "h": h, "output": output}
        summary = {
            "count": len(values),
            "first": int(values[0]) if len(values) else None,
            "last": int(values[-1]) if len(values) else None,
        }
        emit(app, "er", inputs, summary)
    else:
        write_lines(values, None)


def _read_values(path: str) -> list[int]:
    try:
        return [int(line) for line in Path(path).read_text().split()]
    except ValueError as error:
        raise errors.ParameterError(f"Cannot parse {path}: {error}") from error


@click.command()
@click.option("--m", "m", type=int, default=1, show_default=True, help="The window width in elements.")
@click.option(
    "--input",
    "input_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="A file of ascending integers, one per line (as written by 'er').",
)
@pass_app
def gaps(app: App, m, input_path):
    """Find the smallest a_(n+m) - a_n in a list, with the histogram of its gaps."""
    result = app.gaps(_read_values(input_path), m=m)
    rows = [("gap", "count")] + sorted(result.histogram.items())
    emit(app, "gaps", {"m": m, "input": str(input_path)}, result, rows=rows)


@click.command()
@click.option("--r", "r", type=int, default=2, show_default=True, help="The number of prime factors.")
@click.option("--N", "N", type=int, required=True, help="The size parameter N.")
@click.option("--eta", type=float, required=True, help="The smallest factors are at least N^eta.")
@spec_option
@pass_app
def tn(app: App, r, N, eta, spec):
    """Compute T_N exactly next to its asymptotic lower bound."""
    emit(app, "tn", {"r": r, "N": N, "eta": eta, "spec": str(spec)}, app.T_N(N, r, eta, spec))

"""Commands: tuple, narrowest."""

import click

from ergaps import admissible
from ergaps.actions import App
from ergaps.admissible import Tuple

from .base import emit, pass_app, write_lines


def _admissibility_report(t: Tuple) -> dict:
    check = admissible.is_admissible(t)
    return {
        "k": t.k,
        "diameter": t.diameter,
        "admissible": check.admissible,
        "covering_prime": check.covering_prime,
        "missed_residues": check.missed_residues,
    }


@click.command(name="tuple")
@click.option("--k", "k", type=int, default=None, help="Build the tuple of the k smallest primes exceeding k.")
@click.option(
    "--check",
    "check_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Check the admissibility of the tuple in this file (one offset per line).",
)
@click.option(
    "--output",
    "-o",
    default=None,
    help="Write the tuple to this file and print its admissibility report instead of the offsets.",
)
@pass_app
def tuple_cmd(app: App, k, check_file, output):
    """Build an admissible k-tuple from the primes after k, or check a tuple file."""
    if (k is None) == (check_file is None):
        raise click.UsageError("Give exactly one of --k and --check.")

    if check_file:
        t = Tuple.load(check_file)
        emit(app, "tuple", {"check": str(check_file)}, _admissibility_report(t))
        return

    t = app.primes_after_k(k)
    if output:
        write_lines(t.offsets, output)
        emit(app, "tuple", {"k": k, "output": output}, _admissibility_report(t))
    else:
        write_lines(t.offsets, None)


@click.command()
@click.option("--k", "k", type=int, required=True, help="The tuple size (at most 12).")
@click.option("--max-diameter", type=int, default=None, help="The largest diameter to try. Unbounded by default.")
@click.option(
    "--output",
    "-o",
    default=None,
    help="Write the tuple to this file and print a report instead of the offsets.",
)
@pass_app
def narrowest(app: App, k, max_diameter, output):
    """Find the narrowest admissible k-tuple (with h_1 = 0) by exhaustive search."""
    t = app.narrowest(k, max_diameter=max_diameter)
    inputs = {"k": k, "max_diameter": max_diameter}
    if t is None:
        emit(app, "narrowest", inputs, {"found": False})
    elif output:
        write_lines(t.offsets, output)
        emit(app, "narrowest", dict(inputs, output=output), dict(_admissibility_report(t), found=True))
    else:
        write_lines(t.offsets, None)

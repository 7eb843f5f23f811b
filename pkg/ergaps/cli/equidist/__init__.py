"""Command group: equidist."""

import click

from ..base import auto_add_commands


@click.group()
def equidist():
    """Siegel-Walfisz and Bombieri-Vinogradov error sums, computed exactly."""


auto_add_commands(equidist, package=__name__)

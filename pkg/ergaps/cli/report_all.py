"""Command: report-all."""

import click

from ergaps.actions import App

from .base import emit, pass_app


@click.command(name="report-all")
@pass_app
def report_all(app: App):
    """Reproduce every explicit number and run the desk-scale checks at their default sizes."""
    emit(app, "report-all", {}, app.report_all())

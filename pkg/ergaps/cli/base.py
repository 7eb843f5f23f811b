"""Helpers for ergaps.cli."""

import csv
import io
import logging
from types import ModuleType
from typing import Any, Iterable

from apptk.importing import import_all_from_submodules
import click

from ergaps import __version__, errors, events, utils
from ergaps.actions import App
from ergaps.primes import PrimeSetSpec

# Make sure we are always passing App instance.
pass_app = click.make_pass_decorator(App)

#: Exit codes for errors raised by the library.
EXIT_CODES = {
    errors.ParameterError: 2,
    errors.ResourceError: 3,
    errors.NumericalError: 3,
}


def auto_add_commands(group: click.Group, package: str | ModuleType) -> None:
    """Add all click commands from the provided package to the Group."""
    commands = import_all_from_submodules(package=package, filter=lambda x: isinstance(x, click.Command))
    for _, command in commands.items():
        group.add_command(command)


class ErGapsGroup(click.Group):
    """A Group that turns library errors into messages on stderr and fixed exit codes."""

    def invoke(self, ctx: click.Context) -> Any:
        """Invoke the group, mapping ErGapsError subclasses to their exit codes."""
        try:
            return super().invoke(ctx)
        except errors.ErGapsError as error:
            for error_class, code in EXIT_CODES.items():
                if isinstance(error, error_class):
                    click.echo(f"Error: {error}", err=True)
                    ctx.exit(code)
            raise


class Handler(logging.StreamHandler):
    """StreamHandler that adds short log-level prefixes to the formatted log records."""

    PREFIX = {
        logging.INFO: "[i]",
        logging.DEBUG: "[d]",
        logging.WARNING: "[w]",
        logging.ERROR: "[!]",
        logging.FATAL: "!!!",
        logging.CRITICAL: "!!!",
    }

    def format(self, record) -> str:
        """Prefix messages with a shortened form of the logging level."""
        formatted_string = super().format(record)
        prefix = self.PREFIX.get(record.levelno, "[-]")
        return f"{prefix} {formatted_string}"


def turn_on_logging(debug: bool = False):
    """Enable the console logging config (on stderr)."""
    logger = logging.getLogger("ergaps")
    for handler in [h for h in logger.handlers if isinstance(h, Handler)]:
        logger.removeHandler(handler)

    handler = Handler()
    formatter = logging.Formatter("%(message)s")

    handler.setFormatter(formatter)
    logger.addHandler(handler)

    handler.setLevel(logging.DEBUG if debug else logging.WARNING)
    logger.setLevel(logging.DEBUG if debug else logging.WARNING)


class CliUIBase:
    """
    Base class for Command-line Interface UI.

    Allows for "packaging" a bunch of event handlers into a single class. This
    allows the event handlers to have a shared state between each other.
    """

    event_map = {event: event.name.lower() for event in events.Event}

    def __init__(self, delay_registry: bool = False) -> None:
        """
        Initialize the Cli UI.

        :param delay_registry: A boolean that controls if callbacks should be
                               registered to events during __init__, or if the
                               caller will register them manually later.
                               Defaults to False.
        """
        if not delay_registry:
            self.register()

    def register(self):
        """
        Register methods in event_map to their matching events.

        methods can be either direct references to a callable, or a string with
        the name of a method on self.
        """
        for event, callable_or_method_name in self.event_map.items():
            if isinstance(callable_or_method_name, str):
                method = getattr(self, callable_or_method_name, None)
                if method is not None and callable(method):
                    events.register(event=event, callback=method)
            elif callable(callable_or_method_name):
                events.register(event=event, callback=callable_or_method_name)
            else:
                raise ValueError(f"{callable_or_method_name!r} needs to either be a string or a callable.")


class ProgressUI(CliUIBase):
    """Progress reporting on stderr for long computations."""

    event_map: dict[events.Event, str] = {
        events.Event.SIEVE_START: "sieve_start",
        events.Event.SIEVE_END: "sieve_end",
        events.Event.TUPLE_SEARCH_DIAMETER_EXHAUSTED: "diameter_exhausted",
        events.Event.MC_CHUNK_END: "mc_chunk_end",
        events.Event.ENUMERATION_END: "enumeration_end",
    }

    def sieve_start(self, ctx: events.Context) -> None:
        """Handle the start of a sieve."""
        click.echo(f" » Sieving up to {ctx.limit} ({ctx.segments} segment(s))...", err=True)

    def sieve_end(self, ctx: events.Context) -> None:
        """Handle the end of a sieve."""
        click.echo(f" » Found {ctx.prime_count} prime(s) up to {ctx.limit}.", err=True)

    def diameter_exhausted(self, ctx: events.Context) -> None:
        """Handle a diameter that holds no admissible tuple."""
        click.echo(f" » No admissible {ctx.k}-tuple of diameter {ctx.diameter}.", err=True)

    def mc_chunk_end(self, ctx: events.Context) -> None:
        """Handle the end of a Monte Carlo chunk."""
        click.echo(f" » Monte Carlo chunk #{ctx.chunk_no} ({ctx.samples} sample(s)) done.", err=True)

    def enumeration_end(self, ctx: events.Context) -> None:
        """Handle the end of an enumeration."""
        click.echo(f" » Enumerated {ctx.count} number(s).", err=True)


class PrimeSetSpecType(click.ParamType):
    """A prime set given as "mod=M;classes=a1,a2,...;B=b" (or "all")."""

    name = "spec"

    def convert(self, value, param, ctx) -> PrimeSetSpec:
        """Parse the textual form of a prime set."""
        if isinstance(value, PrimeSetSpec):
            return value
        try:
            return PrimeSetSpec.from_text(value)
        except errors.ParameterError as error:
            self.fail(str(error), param, ctx)


class IntervalType(click.ParamType):
    """An interval given as "LO:HI"."""

    name = "interval"

    def __init__(self, number_type: type = int) -> None:
        self.number_type = number_type

    def convert(self, value, param, ctx) -> tuple:
        """Parse "LO:HI"."""
        if isinstance(value, tuple):
            return value
        lo, sep, hi = str(value).partition(":")
        try:
            if not sep:
                raise ValueError("expected LO:HI")
            lo, hi = self.number_type(lo), self.number_type(hi)
        except ValueError as error:
            self.fail(f"{value!r} is not an interval: {error}", param, ctx)
        if lo > hi:
            self.fail(f"{value!r} is empty (LO > HI)", param, ctx)
        return lo, hi


SPEC = PrimeSetSpecType()
INT_INTERVAL = IntervalType(int)
EXPONENT_INTERVAL = IntervalType(float)

spec_option = click.option(
    "--spec",
    type=SPEC,
    default="all",
    show_default=True,
    help='The prime set, e.g. "mod=8;classes=1;B=2" for the primes p = 1 (mod 8).',
)


def render(app: App, command: str, inputs: dict, result: Any, rows: Iterable[Iterable] | None = None) -> str:
    """
    Render a report in the configured output format.

    Every report embeds the command, its inputs, the version and the seed.
    rows (with a header row first) are used for the csv format when given.
    """
    if hasattr(result, "to_dict"):
        result = result.to_dict()
    report = {"command": command, "version": __version__, "seed": app.settings.seed, "inputs": inputs, "result": result}
    output_format = app.settings.format
    digits = app.settings.float_digits

    if output_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if rows is None:
            writer.writerow(["key", "value"])
            rows = _flatten(utils.round_floats(report, digits))
        for row in rows:
            writer.writerow(utils.round_floats(list(row), digits))
        return buffer.getvalue().rstrip("\n")

    if output_format == "text":
        flat = list(_flatten(utils.round_floats(report, digits)))
        width = max(len(key) for key, _ in flat)
        return "\n".join(f" »» {key:{width}s} : {value}" for key, value in flat)

    return utils.dumps_report(report, digits)


def _flatten(value: Any, prefix: str = "") -> Iterable[tuple[str, Any]]:
    if isinstance(value, dict):
        for key in sorted(value):
            yield from _flatten(value[key], f"{prefix}.{key}" if prefix else str(key))
    else:
        yield prefix, value


def emit(app: App, command: str, inputs: dict, result: Any, rows: Iterable[Iterable] | None = None) -> None:
    """Echo a rendered report to stdout."""
    click.echo(render(app, command, inputs, result, rows=rows))


def write_lines(values: Iterable[int], output: str | None) -> None:
    """Write integers one per line to a file, or to stdout when output is None."""
    text = "".join(f"{int(value)}\n" for value in values)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)

"""Logging functionality / utilities."""

import contextlib
import logging
from time import perf_counter

from ergaps.utils import Namespace


class LogTimer:
    """A timer for logging the start and end of a computation with the amount of time that it took."""

    logger: logging.Logger

    def __init__(self, logger: logging.Logger, log_level: int = logging.DEBUG) -> None:
        self.logger = logger
        self.log_level = log_level

    @contextlib.contextmanager
    def __call__(self, message: str, *args):
        """
        Log the amount of time that a computation takes.

        Example::

            logger = logging.getLogger(__name__)
            timer = LogTimer(logger)

            with timer("Sieve up to %d", limit) as elapsed:
                ...
            elapsed.seconds

        Will result in logging like this::

            Started «Sieve up to 1000000»...
            Finished «Sieve up to 1000000» in 0.01234 second(s).
        """
        elapsed = Namespace(seconds=None)
        label = message % args if args else message
        self.logger.log(self.log_level, "Started «%s»...", label)
        start = perf_counter()
        yield elapsed
        elapsed.seconds = perf_counter() - start
        self.logger.log(self.log_level, "Finished «%s» in %.5f second(s).", label, elapsed.seconds)

"""Event-handling for ErGaps."""

import enum
import logging
from typing import Callable

from ergaps.utils import Namespace

logger = logging.getLogger(__name__)


class Event(enum.Enum):
    """An enum of all ErGaps events."""

    # ~ Sieve Events ~
    SIEVE_START = "sieve-start"
    SIEVE_SEGMENT_END = "sieve-segment-end"
    SIEVE_END = "sieve-end"
    SIEVE_CACHE_HIT = "sieve-cache-hit"
    SIEVE_CACHE_WRITE = "sieve-cache-write"

    # ~ Tuple Search Events ~
    TUPLE_SEARCH_START = "tuple-search-start"
    TUPLE_SEARCH_DIAMETER_EXHAUSTED = "tuple-search-diameter-exhausted"
    TUPLE_SEARCH_END = "tuple-search-end"

    # ~ Numeric Events ~
    MC_CHUNK_END = "mc-chunk-end"

    # ~ Enumeration Events ~
    ENUMERATION_END = "enumeration-end"


LOGGING_MAP = {
    Event.SIEVE_START: lambda ctx: ("Sieving [2, %d] in %d segment(s).", ctx.limit, ctx.segments),
    Event.SIEVE_END: lambda ctx: ("Sieved [2, %d]: %d prime(s).", ctx.limit, ctx.prime_count),
    Event.SIEVE_CACHE_HIT: lambda ctx: ("Loaded sieve bitmap from cache (%s).", ctx.path),
    Event.SIEVE_CACHE_WRITE: lambda ctx: ("Wrote sieve bitmap to cache (%s).", ctx.path),
    Event.TUPLE_SEARCH_START: lambda ctx: ("Searching for the narrowest admissible %d-tuple.", ctx.k),
    Event.TUPLE_SEARCH_DIAMETER_EXHAUSTED: lambda ctx: (
        "No admissible %d-tuple of diameter %d (%d node(s) so far).",
        ctx.k,
        ctx.diameter,
        ctx.nodes,
    ),
    Event.TUPLE_SEARCH_END: lambda ctx: (
        ("No admissible %d-tuple found (%d node(s)).", ctx.k, ctx.nodes)
        if ctx.tuple is None
        else ("Found admissible %d-tuple of diameter %d (%d node(s)).", ctx.k, ctx.tuple.diameter, ctx.nodes)
    ),
    Event.MC_CHUNK_END: lambda ctx: ("Monte Carlo chunk #%d done (%d sample(s)).", ctx.chunk_no, ctx.samples),
    Event.ENUMERATION_END: lambda ctx: ("Enumerated %d element(s) of E_%d up to %d.", ctx.count, ctx.r, ctx.limit),
}


class Context(Namespace):
    """
    The context of a triggered event.

    Contains details that event handlers can use to handle said event.
    """

    event: Event | None = None


class EventRegistry:
    """The registry of callbacks to trigger whenever and event occurs."""

    _map: dict[Event, list[Callable]]

    def __init__(self):
        self._initialize_callback_map()

    def _initialize_callback_map(self):
        """Set all events to an empty list of callbacks."""
        self._map = {event: [] for event in Event}

    def clear(self):
        """Reset the current registry, removing all registered callbacks."""
        self._initialize_callback_map()

    def register(self, event: Event, callback: Callable[[Context], None]) -> None:
        """Register a callback to handle the specified event."""
        self._map[event].append(callback)

    def trigger(self, event: Event, context: dict, logger: logging.Logger = logger) -> None:
        """Trigger the specified event, running all callbacks."""
        context = Context(context)
        context.event = event

        if event in LOGGING_MAP:
            args = LOGGING_MAP[event](context)
            logger.debug(*args)

        for callback in self._map[event]:
            callback(context)


registry = EventRegistry()


def trigger(event: Event, context: dict, logger: logging.Logger = logger) -> None:
    """Call trigger on main registry."""
    registry.trigger(event, context, logger)


def register(event: Event, callback: Callable[[Context], None]) -> None:
    """Call register on main registry."""
    registry.register(event, callback)


def clear() -> None:
    """Call clear on main registry."""
    registry.clear()

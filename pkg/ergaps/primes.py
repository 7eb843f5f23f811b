"""Prime tables, restricted prime sets and prime counting functions."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
import logging
import math
from pathlib import Path

import numpy as np

from ergaps import arith, errors, events, utils
from ergaps.logs import LogTimer

logger = logging.getLogger(__name__)
timer = LogTimer(logger)

DEFAULT_SEGMENT_SIZE = 2**18
DEFAULT_BUDGET = 200_000_000


@dataclass(frozen=True)
class PrimeSetSpec(utils.DataclassSerializationMixin):
    """
    A set of primes described by residue classes.

    P = {p prime : p mod modulus in classes}. The default (modulus 1, class 0)
    is the set of all primes. B is the exceptional modulus of the set and delta
    its density among all primes, |classes|/phi(modulus).
    """

    modulus: int = 1
    classes: tuple[int, ...] = (0,)
    B: int = 1
    delta: Fraction | None = None

    def __post_init__(self):
        if self.modulus < 1:
            raise errors.ParameterError(f"modulus must be positive, not {self.modulus}")
        classes = tuple(sorted({int(a) % self.modulus for a in self.classes}))
        if not classes:
            raise errors.ParameterError("At least one residue class is required")
        for a in classes:
            if math.gcd(a, self.modulus) != 1:
                raise errors.ParameterError(f"Residue {a} is not coprime to the modulus {self.modulus}")
        if self.B < 1 or not arith.is_squarefree(self.B):
            raise errors.ParameterError(f"B must be a squarefree positive integer, not {self.B}")

        delta = Fraction(len(classes), arith.phi(self.modulus))
        if self.delta is not None and Fraction(self.delta) != delta:
            raise errors.ParameterError(f"delta={self.delta} does not match |classes|/phi(M) = {delta}")

        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "delta", delta)

    def __str__(self):
        classes = ",".join(map(str, self.classes))
        return f"mod={self.modulus};classes={classes};B={self.B}"

    @classmethod
    def all_primes(cls) -> "PrimeSetSpec":
        """Return the spec of the set of all primes."""
        return cls()

    @classmethod
    def from_text(cls, text: str) -> "PrimeSetSpec":
        """
        Parse the textual form "mod=M;classes=a1,a2,...;B=b".

        Missing keys take their defaults, and "all" is the set of all primes.
        """
        text = text.strip()
        if text in ("", "all"):
            return cls.all_primes()

        kwargs = {}
        for part in filter(None, (p.strip() for p in text.split(";"))):
            key, sep, value = part.partition("=")
            key = key.strip()
            if not sep:
                raise errors.ParameterError(f"Cannot parse prime set {text!r}: expected key=value, got {part!r}")
            try:
                if key == "mod":
                    kwargs["modulus"] = int(value)
                elif key == "classes":
                    kwargs["classes"] = tuple(int(a) for a in value.split(","))
                elif key == "B":
                    kwargs["B"] = int(value)
                else:
                    raise errors.ParameterError(f"Cannot parse prime set {text!r}: unknown key {key!r}")
            except ValueError as error:
                if isinstance(error, errors.ParameterError):
                    raise
                raise errors.ParameterError(f"Cannot parse prime set {text!r}: {error}") from error
        return cls(**kwargs)

    @property
    def is_all_primes(self) -> bool:
        """Return True if this spec places no restriction on the primes."""
        return self.modulus == 1

    def contains(self, p: int) -> bool:
        """Return True if p satisfies the residue condition (p is assumed prime)."""
        return p % self.modulus in self.classes

    def mask(self, values: np.ndarray) -> np.ndarray:
        """Return the residue condition evaluated over an array of values."""
        if self.is_all_primes:
            return np.ones(len(values), dtype=bool)
        return np.isin(values % self.modulus, self.classes)


@dataclass(frozen=True, eq=False)
class SieveTable:
    """An immutable primality table for [0, limit] plus the member primes of a spec."""

    limit: int
    prime_bits: np.ndarray = field(repr=False)
    spec: PrimeSetSpec = field(default_factory=PrimeSetSpec)
    _members: dict = field(default_factory=dict, repr=False, compare=False)

    @cached_property
    def primes(self) -> np.ndarray:
        """All primes <= limit, ascending."""
        return np.flatnonzero(self.prime_bits).astype(np.int64)

    @property
    def member_primes(self) -> np.ndarray:
        """The primes of self.spec that are <= limit, ascending."""
        return self.members(self.spec)

    def members(self, spec: PrimeSetSpec | None = None) -> np.ndarray:
        """Return the primes <= limit belonging to spec (default: self.spec)."""
        spec = spec or self.spec
        if spec not in self._members:
            primes = self.primes
            self._members[spec] = primes if spec.is_all_primes else primes[spec.mask(primes)]
        return self._members[spec]

    def is_prime(self, n: int) -> bool:
        """Look up the primality of n."""
        if n > self.limit:
            raise errors.RangeError(n, self.limit, what="n")
        return n >= 2 and bool(self.prime_bits[n])

    def check_covers(self, x: int, what: str = "x") -> None:
        """Raise a RangeError if x is beyond the limit of this table."""
        if x > self.limit:
            raise errors.RangeError(x, self.limit, what=what)


def naive_sieve(limit: int) -> np.ndarray:
    """
    Return a primality bitmap for [0, limit] using the plain sieve of Eratosthenes.

    Used for the base primes of the segmented sieve, and as an independent
    cross-check of it.
    """
    bits = np.ones(max(limit, 1) + 1, dtype=bool)
    bits[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if bits[p]:
            bits[p * p :: p] = False
    return bits[: limit + 1]


def segmented_sieve(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """Return a primality bitmap for [0, limit], sieving one segment at a time."""
    bits = np.zeros(limit + 1, dtype=bool)
    base_primes = np.flatnonzero(naive_sieve(math.isqrt(limit)))
    segments = -(-(limit + 1) // segment_size)
    events.trigger(events.Event.SIEVE_START, {"limit": limit, "segments": segments}, logger)

    for segment_no, lo in enumerate(range(0, limit + 1, segment_size)):
        hi = min(lo + segment_size, limit + 1)
        segment = bits[lo:hi]
        segment[:] = True
        for p in base_primes:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, -(-lo // p) * p)
            segment[start - lo :: p] = False
        if lo < 2:
            segment[: 2 - lo] = False
        events.trigger(
            events.Event.SIEVE_SEGMENT_END,
            {"segment_no": segment_no, "segments": segments, "lo": lo, "hi": hi},
            logger,
        )

    return bits


def _cache_path(cache_dir: Path, limit: int) -> Path:
    return Path(cache_dir) / f"primes-{limit}.npy"


def sieve_primes(
    limit: int,
    spec: PrimeSetSpec | None = None,
    budget: int = DEFAULT_BUDGET,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    cache_dir: Path | None = None,
) -> SieveTable:
    """
    Build a SieveTable covering [2, limit].

    :param limit: The largest integer the table covers.
    :param spec: (optional) The prime set whose members are tabulated. Defaults
        to all primes.
    :param budget: (optional) The largest allowed limit.
    :param segment_size: (optional) Integers per segment.
    :param cache_dir: (optional) A directory of cached bitmaps to read from and
        write to.
    """
    spec = spec or PrimeSetSpec.all_primes()
    if limit < 2:
        raise errors.ParameterError(f"The sieve limit must be at least 2, not {limit}")
    if limit > budget:
        raise errors.ParameterError(f"The sieve limit {limit} is above the sieve budget {budget}")

    bits = None
    path = _cache_path(cache_dir, limit) if cache_dir else None
    if path is not None and path.exists():
        bits = np.load(path)
        events.trigger(events.Event.SIEVE_CACHE_HIT, {"path": path, "limit": limit}, logger)

    if bits is None:
        with timer("Sieving up to %d", limit):
            bits = segmented_sieve(limit, segment_size=segment_size)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            np.save(path, bits)
            events.trigger(events.Event.SIEVE_CACHE_WRITE, {"path": path, "limit": limit}, logger)

    bits.setflags(write=False)
    table = SieveTable(limit=limit, prime_bits=bits, spec=spec)
    events.trigger(events.Event.SIEVE_END, {"limit": limit, "prime_count": len(table.primes)}, logger)
    return table


def pi_P(table: SieveTable, spec: PrimeSetSpec, x: int) -> int:
    """Count the primes p <= x belonging to spec."""
    table.check_covers(x)
    if x < 2:
        return 0
    return int(np.searchsorted(table.members(spec), x, side="right"))


def pi_P_qa(table: SieveTable, spec: PrimeSetSpec, x: int, q: int, a: int) -> int:
    """Count the primes p <= x belonging to spec with p = a (mod q)."""
    if q < 1 or not 0 <= a < q:
        raise errors.ParameterError(f"Need q >= 1 and 0 <= a < q, got q={q}, a={a}")
    count = pi_P(table, spec, x)
    members = table.members(spec)[:count]
    if q == 1:
        return count
    return int(np.count_nonzero(members % q == a))


def residue_counts(table: SieveTable, spec: PrimeSetSpec, x: int, q: int) -> np.ndarray:
    """Return an array c where c[a] = pi_P_qa(table, spec, x, q, a) for every 0 <= a < q."""
    count = pi_P(table, spec, x)
    return np.bincount(table.members(spec)[:count] % q, minlength=q)


def reciprocal_sum(table: SieveTable, spec: PrimeSetSpec, lo: int, hi: int) -> float:
    """
    Return the sum of 1/p over the primes p of spec with lo <= p <= hi.

    Terms are accumulated in ascending order of p. An empty range sums to 0.
    """
    table.check_covers(hi, what="hi")
    members = table.members(spec)
    start = np.searchsorted(members, lo, side="left")
    stop = np.searchsorted(members, hi, side="right")
    if stop <= start:
        return 0.0
    return float(np.cumsum(1.0 / members[start:stop].astype(np.float64))[-1])


def smallest_prime_factors(limit: int) -> np.ndarray:
    """Return spf where spf[n] is the smallest prime factor of n (0 for n < 2)."""
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for p in np.flatnonzero(naive_sieve(math.isqrt(limit))):
        p = int(p)
        multiples = spf[p * p :: p]
        multiples[multiples == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return spf


def factorize(n: int, spf: np.ndarray) -> list[int]:
    """Factor n (with multiplicity) using a smallest prime factor table."""
    factors = []
    while n > 1:
        p = int(spf[n])
        factors.append(p)
        n //= p
    return factors

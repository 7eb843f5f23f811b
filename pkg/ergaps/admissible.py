"""Admissible tuples: verification, construction and exhaustive search."""

from dataclasses import dataclass, field
import logging
import math
from pathlib import Path

import numpy as np

from ergaps import arith, errors, events, primes, utils
from ergaps.logs import LogTimer

logger = logging.getLogger(__name__)
timer = LogTimer(logger)

#: Largest k that narrowest_search will attempt.
MAX_SEARCH_K = 12

#: k must be at least this for the Dusart-type bounds to be valid.
DUSART_VALIDITY_LOG_K = 18.0


@dataclass(frozen=True)
class Tuple(utils.DataclassSerializationMixin):
    """A strictly ascending list of offsets h_1 < ... < h_k."""

    offsets: tuple[int, ...]

    def __post_init__(self):
        offsets = tuple(int(h) for h in self.offsets)
        if not offsets:
            raise errors.ParameterError("A tuple needs at least one offset")
        if any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise errors.ParameterError(f"Offsets must be strictly ascending: {offsets}")
        object.__setattr__(self, "offsets", offsets)

    def __len__(self):
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    @property
    def k(self) -> int:
        """The number of offsets."""
        return len(self.offsets)

    @property
    def diameter(self) -> int:
        """The width h_k - h_1."""
        return self.offsets[-1] - self.offsets[0]

    def shifted(self, c: int) -> "Tuple":
        """Return the tuple translated by c."""
        return Tuple(tuple(h + c for h in self.offsets))

    def to_text(self) -> str:
        """Return the file format: one integer per line, ascending."""
        return "".join(f"{h}\n" for h in self.offsets)

    @classmethod
    def from_text(cls, text: str) -> "Tuple":
        """Parse the file format produced by to_text."""
        try:
            return cls(tuple(int(line) for line in text.split() if line.strip()))
        except ValueError as error:
            if isinstance(error, errors.ParameterError):
                raise
            raise errors.ParameterError(f"Cannot parse tuple: {error}") from error

    @classmethod
    def load(cls, path: str | Path) -> "Tuple":
        """Read a tuple file."""
        return cls.from_text(Path(path).read_text())


@dataclass
class Admissibility:
    """
    The result of an admissibility check, with its witness.

    When the tuple is admissible, missed_residues maps each prime l <= k to the
    smallest residue class mod l that no offset falls in. Otherwise
    covering_prime is the first prime whose classes are all covered.
    """

    admissible: bool
    covering_prime: int | None = None
    missed_residues: dict[int, int] = field(default_factory=dict)

    def __bool__(self):
        return self.admissible


def is_admissible(t: Tuple, primes_upto: int | None = None) -> Admissibility:
    """
    Check that the offsets of t miss a residue class modulo every prime.

    Only primes l <= k can be covered by k offsets, so by default only those
    are checked.

    :param t: The tuple to check.
    :param primes_upto: (optional) Check every prime up to this bound instead
        of up to k.
    """
    offsets = np.asarray(t.offsets, dtype=np.int64)
    missed = {}
    for ell in arith.small_primes(t.k if primes_upto is None else primes_upto):
        counts = np.bincount(offsets % ell, minlength=ell)
        empty = np.flatnonzero(counts == 0)
        if len(empty) == 0:
            return Admissibility(admissible=False, covering_prime=ell)
        missed[ell] = int(empty[0])
    return Admissibility(admissible=True, missed_residues=missed)


def primes_gt_k_limit_estimate(k: int) -> int:
    """
    Return a sieve limit certain to cover the k smallest primes exceeding k.

    There are fewer than k primes below k, so these are among the first 2k+10
    primes, and the n-th prime is below n(log n + log log n) for n >= 6.
    """
    n = 2 * k + 10
    return max(64, math.ceil(n * (math.log(n) + math.log(math.log(n)))))


def construct_primes_gt_k(
    k: int, table: primes.SieveTable | None = None, budget: int = primes.DEFAULT_BUDGET
) -> Tuple:
    """
    Return the tuple of the k smallest primes exceeding k.

    No prime l <= k divides any of them, so residue 0 is missed mod every such
    l and the tuple is admissible.

    :param k: The tuple length.
    :param table: (optional) A sieve table to take the primes from. One is
        built when this is not given.
    :param budget: (optional) The largest sieve limit to build.
    """
    if k < 1:
        raise errors.ParameterError(f"k must be positive, not {k}")
    required = primes_gt_k_limit_estimate(k)
    if table is None:
        if required > budget:
            raise errors.ResourceError(f"Need a sieve beyond the budget {budget} for k={k}", required=required)
        table = primes.sieve_primes(required, budget=budget)

    candidates = table.primes[np.searchsorted(table.primes, k, side="right") :][:k]
    if len(candidates) < k:
        raise errors.ResourceError(
            f"Sieve limit {table.limit} holds only {len(candidates)} prime(s) above k={k}", required=required
        )
    return Tuple(tuple(int(p) for p in candidates))


@dataclass
class DusartBound(utils.DataclassSerializationMixin):
    """A Dusart-type bound together with whether k is in its validity range."""

    k: float
    value: float
    valid: bool


def _check_dusart_k(k: float) -> float:
    if k <= 1:
        raise errors.ParameterError(f"k must be greater than 1, not {k}")
    return math.log(k)


def dusart_diameter_bound(k: float) -> DusartBound:
    """
    Bound the diameter of the primes-after-k tuple.

    Returns k(1 + 1/log k + 1/(log k)^2)(log k + log log k - 0.9061) - k.
    The bound is only claimed for k >= e^18; below that it is still evaluated
    but flagged as out of validity.
    """
    log_k = _check_dusart_k(k)
    value = k * (1 + 1 / log_k + 1 / log_k**2) * (log_k + math.log(log_k) - 0.9061) - k
    return DusartBound(k=k, value=value, valid=log_k >= DUSART_VALIDITY_LOG_K)


def dusart_prime_count_bound(k: float) -> DusartBound:
    """Return k/log k + k/(log k)^2, the bound used for the number of primes below k."""
    log_k = _check_dusart_k(k)
    return DusartBound(k=k, value=k / log_k + k / log_k**2, valid=log_k >= DUSART_VALIDITY_LOG_K)


class _BudgetExceeded(Exception):
    pass


class _BranchSearch:
    """Depth-first search for the lexicographically first admissible tuple in one branch."""

    def __init__(self, k: int, diameter: int, node_cap: int) -> None:
        self.k = k
        self.diameter = diameter
        self.node_cap = node_cap
        self.nodes = 0
        self.chosen: list[int] = []
        self.moduli = arith.small_primes(k)
        self.counts = {ell: [0] * ell for ell in self.moduli}
        self.covered = {ell: 0 for ell in self.moduli}

    def add(self, h: int) -> bool:
        """Add h to the coverage counts, returning False if some prime became fully covered."""
        ok = True
        for ell in self.moduli:
            counts = self.counts[ell]
            residue = h % ell
            if counts[residue] == 0:
                self.covered[ell] += 1
                if self.covered[ell] == ell:
                    ok = False
            counts[residue] += 1
        return ok

    def remove(self, h: int) -> None:
        for ell in self.moduli:
            counts = self.counts[ell]
            residue = h % ell
            counts[residue] -= 1
            if counts[residue] == 0:
                self.covered[ell] -= 1

    def dfs(self, start: int, remaining: int) -> bool:
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise _BudgetExceeded()
        if remaining == 0:
            return True
        # Leave room for the remaining-1 even offsets that must follow h.
        for h in range(start, self.diameter - 2 * (remaining - 1), 2):
            if self.add(h):
                self.chosen.append(h)
                if self.dfs(h + 2, remaining - 1):
                    return True
                self.chosen.pop()
            self.remove(h)
        return False

    def run(self, first: int | None) -> Tuple | None:
        """Search tuples 0 < first < ... < diameter (first=None when k == 2)."""
        fixed = [0, self.diameter] + ([] if first is None else [first])
        if all([self.add(h) for h in fixed]):
            start = 2 if first is None else first + 2
            if self.dfs(start, self.k - len(fixed)):
                return Tuple(tuple(sorted(fixed + self.chosen)))
        else:
            self.nodes += 1
        return None


def _search_diameter(k: int, diameter: int, node_cap: int, workers: int) -> tuple[Tuple | None, int]:
    """Search every admissible k-tuple with h_1 = 0 and h_k = diameter; return the first and the node count."""

    def branch(first):
        search = _BranchSearch(k, diameter, node_cap)
        try:
            return search.run(first), search.nodes
        except _BudgetExceeded:
            return None, node_cap + 1

    firsts = [None] if k == 2 else list(range(2, diameter - 2 * (k - 3), 2))
    results = utils.parallel_map(branch, firsts, workers=workers)
    nodes = sum(n for _, n in results)
    found = next((t for t, _ in results if t is not None), None)
    return found, nodes


def narrowest_search(
    k: int, max_diameter: int | None = None, node_budget: int = 5_000_000, workers: int = 1
) -> Tuple | None:
    """
    Find an admissible k-tuple of minimal diameter by exhaustive search.

    Tuples are normalised to h_1 = 0. For k >= 2 every offset has to be even
    (otherwise both classes mod 2 are covered). Diameters are tried in
    increasing order and, for a diameter, branches are merged in order of h_2,
    so the lexicographically smallest tuple of the minimal diameter is
    returned regardless of the number of workers.

    :param k: The tuple length, at most MAX_SEARCH_K.
    :param max_diameter: (optional) The largest diameter to try. Returns None
        if no admissible tuple fits. Unbounded by default.
    :param node_budget: (optional) The maximum number of search nodes.
    :param workers: (optional) Number of threads to search branches with.
    """
    if not 1 <= k <= MAX_SEARCH_K:
        raise errors.ParameterError(f"narrowest_search supports 1 <= k <= {MAX_SEARCH_K}, not {k}")
    events.trigger(events.Event.TUPLE_SEARCH_START, {"k": k, "max_diameter": max_diameter}, logger)

    if k == 1:
        result = Tuple((0,))
        events.trigger(events.Event.TUPLE_SEARCH_END, {"k": k, "tuple": result, "nodes": 1}, logger)
        return result

    total_nodes = 0
    diameter = 2 * (k - 1)
    result = None
    with timer("Narrowest admissible %d-tuple search", k):
        while max_diameter is None or diameter <= max_diameter:
            found, nodes = _search_diameter(k, diameter, node_budget - total_nodes, workers)
            total_nodes += nodes
            if total_nodes > node_budget:
                raise errors.ResourceError(
                    f"Narrowest {k}-tuple search exceeded the node budget {node_budget} at diameter {diameter}"
                )
            if found is not None:
                result = found
                break
            events.trigger(
                events.Event.TUPLE_SEARCH_DIAMETER_EXHAUSTED,
                {"k": k, "diameter": diameter, "nodes": total_nodes},
                logger,
            )
            diameter += 2

    events.trigger(events.Event.TUPLE_SEARCH_END, {"k": k, "tuple": result, "nodes": total_nodes}, logger)
    return result

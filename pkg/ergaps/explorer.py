"""Enumeration of E_r numbers, gap scans, the T_N sum and the convolution identity."""

from dataclasses import dataclass, field
import logging
import math

import numpy as np

from ergaps import errors, events, primes, utils
from ergaps.logs import LogTimer
from ergaps.primes import PrimeSetSpec, SieveTable

logger = logging.getLogger(__name__)
timer = LogTimer(logger)


@dataclass
class ErConfig(utils.DataclassSerializationMixin):
    """
    Configuration of an E_r enumeration.

    In plain mode the products of r distinct primes of spec up to X are
    enumerated. Setting N, eta and h switches to the constrained E_h set.
    """

    r: int
    X: int
    spec: PrimeSetSpec = field(default_factory=PrimeSetSpec)
    N: int | None = None
    eta: float | None = None
    h: int | None = None

    def __post_init__(self):
        if self.r < 1:
            raise errors.ParameterError(f"r must be positive, not {self.r}")
        if self.X < 1:
            raise errors.ParameterError(f"X must be positive, not {self.X}")
        if self.is_constrained:
            if None in (self.N, self.eta, self.h):
                raise errors.ParameterError("Constrained mode needs all of N, eta and h")
            if not 0 < self.eta < 1 / self.r:
                raise errors.ParameterError(f"eta must be in (0, 1/r) = (0, {1 / self.r:.6g}), not {self.eta}")
            if not 1 <= self.h <= self.r:
                raise errors.ParameterError(f"h must be in [1, r={self.r}], not {self.h}")

    @property
    def is_constrained(self) -> bool:
        return any(value is not None for value in (self.N, self.eta, self.h))


def _products(
    members: np.ndarray,
    r: int,
    limit: int,
    first_min: int = 2,
    last_min: int = 2,
    workers: int = 1,
) -> np.ndarray:
    """
    Return every product p_1 < ... < p_r <= limit of the given primes, ascending.

    p_1 must be at least first_min and p_r at least last_min. The search runs
    over ascending factors and the last factor is handled with a vectorised
    slice; branches on p_1 are merged in order.
    """
    if r == 1:
        lo = max(first_min, last_min)
        return members[(members >= lo) & (members <= limit)].astype(np.int64)

    last_start = int(np.searchsorted(members, last_min, side="left"))

    def recurse(product: int, start: int, remaining: int, out: list) -> None:
        if remaining == 1:
            lo = max(start, last_start)
            hi = int(np.searchsorted(members, limit // product, side="right"))
            if hi > lo:
                out.append(members[lo:hi].astype(np.int64) * product)
            return
        for i in range(start, len(members)):
            p = int(members[i])
            if p**remaining > limit // product:
                break
            recurse(product * p, i + 1, remaining - 1, out)

    def branch(i: int) -> np.ndarray:
        out = []
        recurse(int(members[i]), i + 1, r - 1, out)
        return np.concatenate(out) if out else np.empty(0, dtype=np.int64)

    first = int(np.searchsorted(members, first_min, side="left"))
    firsts = []
    for i in range(first, len(members)):
        if int(members[i]) ** r > limit:
            break
        firsts.append(i)

    parts = utils.parallel_map(branch, firsts, workers=workers)
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.sort(np.concatenate(parts))


def _required_limit(table: SieveTable, spec: PrimeSetSpec, r: int, X: int) -> int:
    """The largest prime factor an element of E_r(P) up to X can have."""
    smallest = table.members(spec)[: r - 1]
    if len(smallest) < r - 1:
        return X // 2 ** (r - 1)
    return X // max(1, math.prod(int(p) for p in smallest))


def enumerate_Er(
    cfg: ErConfig, table: SieveTable, budget: int = primes.DEFAULT_BUDGET, workers: int = 1
) -> np.ndarray:
    """
    Return every squarefree n <= X with exactly r prime factors, all in cfg.spec, ascending.

    The table has to cover the largest possible prime factor, X divided by the
    product of the r-1 smallest primes of the set.
    """
    if cfg.is_constrained:
        return enumerate_Eh_constrained(cfg.N, cfg.h, cfg.eta, cfg.spec, table, workers=workers)
    if cfg.X > budget:
        raise errors.ResourceError(f"X={cfg.X} is above the sieve budget {budget}", required=cfg.X)
    table.check_covers(_required_limit(table, cfg.spec, cfg.r, cfg.X), what="largest prime factor")

    with timer("Enumerating E_%d up to %d", cfg.r, cfg.X):
        result = _products(table.members(cfg.spec), cfg.r, cfg.X, workers=workers)
    events.trigger(events.Event.ENUMERATION_END, {"count": len(result), "r": cfg.r, "limit": cfg.X}, logger)
    return result


def enumerate_Eh_constrained(
    N: int, h: int, eta: float, spec: PrimeSetSpec, table: SieveTable, workers: int = 1
) -> np.ndarray:
    """
    Return the products p_1 < ... < p_h <= 2N of primes of spec with p_1 >= N^eta and p_h >= N^(1/2).

    An empty array is returned when the constraints cannot be met.
    """
    if h < 1:
        raise errors.ParameterError(f"h must be positive, not {h}")
    if not eta > 0:
        raise errors.ParameterError(f"eta must be positive, not {eta}")
    first_min = max(2, utils.ceil_power(N, eta))
    last_min = max(2, utils.ceil_sqrt(N))
    limit = 2 * N
    table.check_covers(limit // first_min ** (h - 1), what="largest prime factor")

    result = _products(table.members(spec), h, limit, first_min=first_min, last_min=last_min, workers=workers)
    events.trigger(events.Event.ENUMERATION_END, {"count": len(result), "r": h, "limit": limit}, logger)
    return result


def enumerate_Er_by_factorization(cfg: ErConfig) -> np.ndarray:
    """
    Return E_r(P) up to X by factoring every n <= X.

    Slower than enumerate_Er; it shares nothing with it beyond the prime set
    and is used to cross-check it.
    """
    X = cfg.X
    spf = primes.smallest_prime_factors(X)
    rest = np.arange(X + 1, dtype=np.int64)
    count = np.zeros(X + 1, dtype=np.int64)
    previous = np.zeros(X + 1, dtype=np.int64)
    ok = np.ones(X + 1, dtype=bool)
    ok[:2] = False

    while True:
        active = np.flatnonzero(rest > 1)
        if len(active) == 0:
            break
        p = spf[rest[active]].astype(np.int64)
        # Factors come out in ascending order, so a repeat means a square divisor.
        ok[active] &= (p != previous[active]) & cfg.spec.mask(p)
        count[active] += 1
        previous[active] = p
        rest[active] //= p

    return np.flatnonzero(ok & (count == cfg.r)).astype(np.int64)


@dataclass
class GapScanResult(utils.DataclassSerializationMixin):
    """The smallest window a_{n+m} - a_n of a list, with a histogram of its consecutive gaps."""

    m: int
    min_window: int
    location: int
    start: int
    histogram: dict[int, int]

    def count_within(self, distance: int) -> int:
        """Return the number of consecutive pairs at distance <= distance."""
        return sum(count for gap, count in self.histogram.items() if gap <= distance)


def gap_scan(values, m: int = 1) -> GapScanResult:
    """
    Scan an ascending list for the smallest a_{n+m} - a_n.

    location is the first n achieving it and start is a_n.
    """
    values = np.asarray(values, dtype=np.int64)
    if m < 1:
        raise errors.ParameterError(f"m must be positive, not {m}")
    if len(values) <= m:
        raise errors.ParameterError(f"Need more than m={m} values for a gap scan, got {len(values)}")
    if np.any(np.diff(values) <= 0):
        raise errors.ParameterError("Values must be strictly ascending")

    windows = values[m:] - values[:-m]
    location = int(np.argmin(windows))
    gaps, counts = np.unique(np.diff(values), return_counts=True)
    return GapScanResult(
        m=m,
        min_window=int(windows[location]),
        location=location,
        start=int(values[location]),
        histogram={int(g): int(c) for g, c in zip(gaps, counts)},
    )


@dataclass
class TNReport(utils.DataclassSerializationMixin):
    """T_N next to its asymptotic lower bound and the intermediate reciprocal-sum form."""

    N: int
    r: int
    eta: float
    T_N: int
    lower_bound: float
    reciprocal_form: float
    ratio: float
    q_count: int


def _check_eta_T_N(r: int, eta: float) -> None:
    if r < 2:
        raise errors.ParameterError(f"r must be at least 2, not {r}")
    if not 0 < eta < 1 / (2 * (r - 1)):
        raise errors.ParameterError(f"eta must be in (0, 1/(2(r-1))) = (0, {1 / (2 * (r - 1)):.6g}), not {eta}")


def T_N_lower_bound(N: int, r: int, eta: float, delta: float) -> float:
    """Return delta^r N / ((log N)(r-1)!) * log(1/(2(r-1)eta))^(r-1)."""
    _check_eta_T_N(r, eta)
    delta = float(delta)
    return (
        delta**r * N / (math.log(N) * math.factorial(r - 1)) * math.log(1 / (2 * (r - 1) * eta)) ** (r - 1)
    )


def compute_T_N(N: int, r: int, eta: float, spec: PrimeSetSpec, table: SieveTable, workers: int = 1) -> TNReport:
    """
    Compute T_N exactly.

    T_N sums X_{N/q} over q = p_1 ... p_{r-1} < N^(1/2) with N^eta <= p_1 < ... < p_{r-1}
    in P, where X_n counts the primes t of P with t >= N^(1/2) and n <= t < 2n.
    """
    _check_eta_T_N(r, eta)
    table.check_covers(2 * N - 1, what="2N-1")
    members = table.members(spec)

    first_min = max(2, utils.ceil_power(N, eta))
    # q^2 < N
    q_values = _products(members, r - 1, math.isqrt(N - 1), first_min=first_min, workers=workers)
    sqrt_n = utils.ceil_sqrt(N)
    lo = np.maximum(-(-N // q_values), sqrt_n)
    hi = (2 * N - 1) // q_values
    counts = np.searchsorted(members, hi, side="right") - np.searchsorted(members, lo, side="left")
    total = int(np.clip(counts, 0, None).sum())

    lower_bound = T_N_lower_bound(N, r, eta, spec.delta)
    reciprocal_hi = utils.floor_power(N, 1 / (2 * (r - 1)))
    reciprocal = primes.reciprocal_sum(table, spec, first_min, reciprocal_hi)
    reciprocal_form = float(spec.delta) * N / (math.log(N) * math.factorial(r - 1)) * reciprocal ** (r - 1)

    return TNReport(
        N=N,
        r=r,
        eta=eta,
        T_N=total,
        lower_bound=lower_bound,
        reciprocal_form=reciprocal_form,
        ratio=total / lower_bound,
        q_count=len(q_values),
    )


#
# Convolution identity
#


def _range_primes(members: np.ndarray, interval: tuple[int, int], limit: int) -> np.ndarray:
    lo, hi = interval
    hi = min(hi, limit)
    return members[np.searchsorted(members, lo, side="left") : np.searchsorted(members, hi, side="right")]


def _check_ranges(ranges: list[tuple[int, int]]) -> None:
    """Raise a ParameterError unless every pair of ranges is identical or disjoint."""
    for interval in ranges:
        if interval[0] > interval[1]:
            raise errors.ParameterError(f"Empty range {interval[0]}:{interval[1]}")
    for i, a in enumerate(ranges):
        for b in ranges[i + 1 :]:
            if a != b and a[0] <= b[1] and b[0] <= a[1]:
                raise errors.ParameterError(f"Ranges {a[0]}:{a[1]} and {b[0]}:{b[1]} overlap without being equal")


def product_set_indicator(members: np.ndarray, ranges: list[tuple[int, int]], limit: int) -> np.ndarray:
    """Return the indicator over [0, limit] of the products p_1...p_j of distinct primes with p_i in ranges[i]."""
    indicator = np.zeros(limit + 1, dtype=bool)
    factor_lists = [[int(p) for p in _range_primes(members, interval, limit)] for interval in ranges]

    def recurse(depth: int, product: int, used: tuple) -> None:
        if depth == len(factor_lists):
            indicator[product] = True
            return
        for p in factor_lists[depth]:
            if product * p > limit:
                break
            if p not in used:
                recurse(depth + 1, product * p, used + (p,))

    recurse(0, 1, ())
    return indicator


@dataclass
class ConvolutionReport(utils.DataclassSerializationMixin):
    """Where beta_{r-1} * 1_{P_r} differs from c * beta_r on [1, X]."""

    X: int
    r: int
    c: int
    exceptional: list[int]
    max_deviation: int
    violations: list[int]
    holds: bool


def multiplicity(range_r_minus_1: list[tuple[int, int]], range_r: tuple[int, int]) -> int:
    """Return c, the number of the r ranges (range_r included) equal to range_r."""
    return 1 + sum(1 for interval in range_r_minus_1 if tuple(interval) == tuple(range_r))


def convolution_delta_check(
    X: int,
    spec: PrimeSetSpec,
    range_r_minus_1: list[tuple[int, int]],
    range_r: tuple[int, int],
    table: SieveTable,
    c: int | None = None,
) -> ConvolutionReport:
    """
    Compare (beta_{r-1} * 1_{P_r})(n) with c * beta_r(n) for every n <= X.

    beta_j is the indicator of products of j distinct primes of spec, the i-th
    taken from the i-th range. The difference may only be nonzero at n
    divisible by p^2 for a prime p of the last range; those n are listed as
    exceptional, and any other nonzero n is a violation.
    """
    ranges = [tuple(interval) for interval in range_r_minus_1] + [tuple(range_r)]
    _check_ranges(ranges)
    expected_c = multiplicity(range_r_minus_1, range_r)
    if c is None:
        c = expected_c
    elif c != expected_c:
        raise errors.ParameterError(f"c={c} does not match the {expected_c} range(s) equal to the last range")
    table.check_covers(min(X, max(hi for _, hi in ranges)), what="range end")

    members = table.members(spec)
    beta_lower = product_set_indicator(members, ranges[:-1], X)
    beta_r = product_set_indicator(members, ranges, X)
    last_primes = _range_primes(members, range_r, X)

    lower_support = np.flatnonzero(beta_lower)
    convolution = np.zeros(X + 1, dtype=np.int64)
    square_divisible = np.zeros(X + 1, dtype=bool)
    for p in last_primes:
        p = int(p)
        multiples = lower_support[lower_support <= X // p]
        convolution[multiples * p] += 1
        if p * p <= X:
            square_divisible[p * p :: p * p] = True

    difference = convolution - c * beta_r.astype(np.int64)
    nonzero = np.flatnonzero(difference)
    violations = nonzero[~square_divisible[nonzero]]
    return ConvolutionReport(
        X=X,
        r=len(ranges),
        c=c,
        exceptional=[int(n) for n in nonzero],
        max_deviation=int(np.abs(difference).max()) if len(difference) else 0,
        violations=[int(n) for n in violations],
        holds=len(violations) == 0,
    )


@dataclass
class DyadicBlock(utils.DataclassSerializationMixin):
    """The two sums of one dyadic block, which have to agree."""

    omega: int
    full: int
    restricted: int

    @property
    def equal(self) -> bool:
        return self.full == self.restricted


def dyadic_split_check(
    X: int,
    spec: PrimeSetSpec,
    range_r_minus_1: list[tuple[int, int]],
    range_r: tuple[int, int],
    table: SieveTable,
) -> list[DyadicBlock]:
    """
    Check the dyadic splitting identity on every block J_omega = [2^omega, 2^(omega+1)).

    With beta_{r-1, omega} the restriction of beta_{r-1} to J_omega and
    1_{P_r, omega} the restriction of 1_{P_r} to K_omega = [1, X/2^omega],
    the sums over n < X of beta_{r-1, omega} * 1_{P_r} and
    beta_{r-1, omega} * 1_{P_r, omega} are equal.
    """
    ranges = [tuple(interval) for interval in range_r_minus_1] + [tuple(range_r)]
    _check_ranges(ranges)
    table.check_covers(min(X, max(hi for _, hi in ranges)), what="range end")
    members = table.members(spec)
    support = np.flatnonzero(product_set_indicator(members, ranges[:-1], X))
    last_primes = _range_primes(members, range_r, X)

    blocks = []
    omega = 0
    while 2**omega < X:
        lo, hi = 2**omega, 2 ** (omega + 1)
        block = support[(support >= lo) & (support < hi)]
        # Number of p with p*d < X, with and without p <= X/2^omega.
        full_counts = np.searchsorted(last_primes, (X - 1) // block, side="right")
        restricted_counts = np.searchsorted(
            last_primes, np.minimum((X - 1) // block, X // lo), side="right"
        )
        blocks.append(DyadicBlock(omega=omega, full=int(full_counts.sum()), restricted=int(restricted_counts.sum())))
        omega += 1
    return blocks

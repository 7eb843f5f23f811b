"""Siegel-Walfisz and Bombieri-Vinogradov error sums, evaluated exactly at desk scale."""

from dataclasses import dataclass, field
import logging
import math

import numpy as np

from ergaps import arith, errors, explorer, primes, utils
from ergaps.logs import LogTimer
from ergaps.primes import PrimeSetSpec, SieveTable

logger = logging.getLogger(__name__)
timer = LogTimer(logger)

DEFAULT_Q_CAP = 1_000_000


def _coprime_residues(q: int) -> np.ndarray:
    return np.gcd(np.arange(q), q) == 1


def _check_q(q: int, spec: PrimeSetSpec) -> None:
    if q < 1:
        raise errors.ParameterError(f"q must be positive, not {q}")
    if math.gcd(q, spec.B) != 1:
        raise errors.ParameterError(f"q={q} is not coprime to the exceptional modulus B={spec.B}")


def sw_error(table: SieveTable, spec: PrimeSetSpec, x: int, q: int) -> float:
    """Return the max over (a, q) = 1 of |pi_P(x; q, a) - pi_P(x)/phi(q)|."""
    _check_q(q, spec)
    counts = primes.residue_counts(table, spec, x, q)
    main = primes.pi_P(table, spec, x) / arith.phi(q)
    return float(np.abs(counts[_coprime_residues(q)] - main).max())


def partition_identity(table: SieveTable, spec: PrimeSetSpec, x: int, q: int) -> tuple[int, int]:
    """
    Return both sides of the partition of pi_P(x) by residues mod q.

    The left side is pi_P(x); the right side sums pi_P(x; q, a) over (a, q) = 1
    and adds the primes of P dividing q.
    """
    counts = primes.residue_counts(table, spec, x, q)
    dividing = sum(1 for p in arith.prime_factors(q) if p <= x and spec.contains(p)) if q > 1 else 0
    return primes.pi_P(table, spec, x), int(counts[_coprime_residues(q)].sum()) + dividing


@dataclass
class BVReport(utils.DataclassSerializationMixin):
    """An error sum over moduli q <= Q, with the per-q terms."""

    x: int
    theta: float
    Q: int
    sum: float
    main_term: float
    ratio: float
    terms: dict[int, float] = field(default_factory=dict)


def _moduli(Q: int, B: int, q_cap: int) -> list[int]:
    if Q > q_cap:
        raise errors.ResourceError(f"Moduli up to {Q} exceed the cap {q_cap}", required=Q)
    return [q for q in range(1, Q + 1) if math.gcd(q, B) == 1]


def bv_sum(
    table: SieveTable,
    spec: PrimeSetSpec,
    x: int,
    theta: float,
    q_cap: int = DEFAULT_Q_CAP,
    workers: int = 1,
) -> BVReport:
    """
    Return the sum of sw_error(x, q) over q <= x^theta with (q, B) = 1.

    Terms are computed independently and added in order of q.
    """
    table.check_covers(x)
    if not 0 <= theta <= 1:
        raise errors.ParameterError(f"theta must be in [0, 1], not {theta}")
    Q = max(1, utils.floor_power(x, theta))
    moduli = _moduli(Q, spec.B, q_cap)

    with timer("Bombieri-Vinogradov sum for x=%d, Q=%d", x, Q):
        errors_by_q = utils.parallel_map(lambda q: sw_error(table, spec, x, q), moduli, workers=workers)
    total = 0.0
    for error in errors_by_q:
        total += error
    main = primes.pi_P(table, spec, x)
    return BVReport(
        x=x,
        theta=theta,
        Q=Q,
        sum=total,
        main_term=main,
        ratio=total / main if main else 0.0,
        terms=dict(zip(moduli, errors_by_q)),
    )


def exponent_ranges(N: int, ranges: list[tuple[float, float]]) -> list[tuple[int, int]]:
    """Convert exponent ranges [a_i, b_i] into the integer intervals [N^a_i, N^b_i]."""
    return [(utils.ceil_power(N, a), utils.floor_power(N, b)) for a, b in ranges]


def bv_sum_beta_r(
    N: int,
    u: float,
    r: int,
    ranges: list[tuple[float, float]],
    spec: PrimeSetSpec,
    theta_exponent: float,
    table: SieveTable,
    q_cap: int = DEFAULT_Q_CAP,
    workers: int = 1,
) -> BVReport:
    """
    Evaluate the error sum for the products of r distinct primes with factors in ranges.

    beta_r is the indicator of F_r = {p_1 ... p_r : p_i in P, N^a_i <= p_i <= N^b_i,
    all distinct}. The sum runs over q <= (N^u)^theta_exponent with (q, B) = 1
    of max over (a, q) = 1 of |sum_{n < N^u} (beta_r(n; q)/phi(q) - beta_r(n; q, a))|,
    where beta_r(n; q) keeps the n coprime to q.
    """
    if len(ranges) != r:
        raise errors.ParameterError(f"Need one range per factor: r={r}, got {len(ranges)} range(s)")
    x = utils.ceil_power(N, u)
    intervals = exponent_ranges(N, ranges)
    table.check_covers(min(x, max(hi for _, hi in intervals)), what="range end")

    # n < N^u
    elements = np.flatnonzero(explorer.product_set_indicator(table.members(spec), intervals, x - 1))
    Q = max(1, utils.floor_power(N, u * theta_exponent))
    moduli = _moduli(Q, spec.B, q_cap)

    def term(q: int) -> float:
        coprime = np.gcd(elements, q) == 1
        counts = np.bincount(elements % q, minlength=q)
        main = int(coprime.sum()) / arith.phi(q)
        return float(np.abs(main - counts[_coprime_residues(q)]).max())

    with timer("Error sum for E_%d numbers below N^u=%d, Q=%d", r, x, Q):
        errors_by_q = utils.parallel_map(term, moduli, workers=workers)
    total = 0.0
    for error in errors_by_q:
        total += error
    return BVReport(
        x=x,
        theta=theta_exponent,
        Q=Q,
        sum=total,
        main_term=len(elements),
        ratio=total / len(elements) if len(elements) else 0.0,
        terms=dict(zip(moduli, errors_by_q)),
    )


def decay_report(
    table: SieveTable,
    spec: PrimeSetSpec,
    xs: list[int],
    theta: float,
    q_cap: int = DEFAULT_Q_CAP,
    workers: int = 1,
) -> list[BVReport]:
    """Return bv_sum(x, theta) (and its ratio to pi_P(x)) for every x, in order."""
    return [bv_sum(table, spec, x, theta, q_cap=q_cap, workers=workers) for x in xs]

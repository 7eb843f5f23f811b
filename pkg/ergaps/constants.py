"""Explicit constants: the k threshold, nu, the bound on m-tuple gaps and the class group example."""

from dataclasses import dataclass, field
from fractions import Fraction
import logging
import math

from ergaps import admissible, arith, errors, functional, primes, utils

logger = logging.getLogger(__name__)

#: The prime set {p = 1 mod 8} used for the class group example.
EXAMPLE_DELTA = Fraction(1, 4)
EXAMPLE_B = 2
EXAMPLE_THETA = 0.5

EPSILON_NOTE = "epsilon taken as 0 (limit value) in rho and in R = N^(theta/2 - epsilon)"


def _check_inputs(r: int, rho: float, delta: float, B: int, theta: float) -> None:
    if r < 2:
        raise errors.ParameterError(f"r must be at least 2, not {r}")
    if not rho > 0:
        raise errors.ParameterError(f"rho must be positive, not {rho}")
    if not 0 < delta <= 1:
        raise errors.ParameterError(f"delta must be in (0, 1], not {delta}")
    if B < 1 or not arith.is_squarefree(B):
        raise errors.ParameterError(f"B must be a squarefree positive integer, not {B}")
    if not 0 < theta <= 0.5:
        raise errors.ParameterError(f"theta must be in (0, 1/2], not {theta}")


def log_k_threshold(r: int, rho: float, delta: float, B: int, theta: float) -> float:
    """Return r + (r/delta)(2 B rho (r-1)! / (phi(B) theta (r-1)^(r-1)))^(1/r), the log of k_threshold."""
    _check_inputs(r, rho, delta, B, theta)
    delta = float(delta)
    inner = 2 * B * rho * math.factorial(r - 1) / (arith.phi(B) * theta * (r - 1) ** (r - 1))
    return r + (r / delta) * inner ** (1 / r)


def _exp(value: float) -> float:
    try:
        return math.exp(value)
    except OverflowError as error:
        raise errors.NumericalError(f"exp({value}) overflows a double") from error


def k_threshold(r: int, rho: float, delta: float, B: int, theta: float) -> float:
    """Return the k above which at least rho + 1 of the k forms are E_r numbers infinitely often."""
    return _exp(log_k_threshold(r, rho, delta, B, theta))


def script_L_and_gap(r: int, m: int, delta: float, B: int, theta: float) -> tuple[float, float]:
    """Return (L, L log L), the m-tuple threshold with m in place of rho and its gap bound."""
    log_L = log_k_threshold(r, m, delta, B, theta)
    script_L = _exp(log_L)
    return script_L, script_L * log_L


@dataclass
class NuResult(utils.DataclassSerializationMixin):
    """nu computed from a lower bound of M_{k,eta}, so itself a lower bound."""

    k: int
    r: int
    eta: float
    M_lower: float
    available: bool
    value: int | None = None
    is_lower_bound: bool = True


def nu_expression(k: int, r: int, delta: float, B: int, theta: float, M_lower: float, eta: float) -> float:
    """Return theta phi(B) delta^r M / (2B(r-1)!) * log(1/(2(r-1)eta))^(r-1) before the ceiling."""
    if not 0 < eta < 1 / (2 * (r - 1)):
        raise errors.ParameterError(f"eta={eta} is outside (0, 1/(2(r-1))) for r={r}")
    delta = float(delta)
    factor = theta * arith.phi(B) * delta**r * M_lower / (2 * B * math.factorial(r - 1))
    return factor * math.log(1 / (2 * (r - 1) * eta)) ** (r - 1)


def nu(k: int, r: int, delta: float, B: int, theta: float, M_lower: float) -> NuResult:
    """
    Return nu for the tuple size k, with M_{k,eta} replaced by M_lower.

    eta comes from choose_A_eta. A non-positive M_lower gives a vacuous bound,
    reported as unavailable.
    """
    params = functional.choose_A_eta(k, r, theta)
    if M_lower <= 0:
        # Still validates eta.
        nu_expression(k, r, delta, B, theta, 1.0, params.eta)
        return NuResult(k=k, r=r, eta=params.eta, M_lower=M_lower, available=False)
    value = math.ceil(nu_expression(k, r, delta, B, theta, M_lower, params.eta))
    return NuResult(k=k, r=r, eta=params.eta, M_lower=M_lower, available=True, value=value)


@dataclass
class InequalityCheck(utils.DataclassSerializationMixin):
    """Both sides of an inequality and whether it holds."""

    lhs: float
    rhs: float
    holds: bool


def final2_check(k: int, r: int, theta: float) -> InequalityCheck:
    """Check log(1/(2(r-1)eta)) >= log(k^((r-1)/r)/((r-1)theta)) for eta = T theta/(2k), A = log(k)/r."""
    params = functional.choose_A_eta(k, r, theta)
    lhs = math.log(1 / (2 * (r - 1) * params.eta))
    rhs = ((r - 1) / r) * math.log(k) - math.log((r - 1) * theta)
    return InequalityCheck(lhs=lhs, rhs=rhs, holds=lhs >= rhs)


def final3_check(k: int, r: int, rho: float, delta: float, B: int, theta: float) -> InequalityCheck:
    """
    Check the sufficient inequality for k.

    (log(k/e^r)/r) * log(k^((r-1)/r)/((r-1)theta))^(r-1) > 2B rho (r-1)!/(phi(B) delta^r theta)
    """
    _check_inputs(r, rho, delta, B, theta)
    log_k = math.log(k)
    lhs = ((log_k - r) / r) * (((r - 1) / r) * log_k - math.log((r - 1) * theta)) ** (r - 1)
    rhs = 2 * B * rho * math.factorial(r - 1) / (arith.phi(B) * float(delta) ** r * theta)
    return InequalityCheck(lhs=lhs, rhs=rhs, holds=lhs > rhs)


def example_C(m: int) -> tuple[int, float]:
    """
    Return (k, C(m)) for the class group example.

    k = ceil(exp(2 + 16 sqrt(2(m-1)))), and C(m) is the bound on the diameter
    of the tuple of the k smallest primes exceeding k.
    """
    if m < 2:
        raise errors.ParameterError(f"m must be at least 2, not {m}")
    k = math.ceil(_exp(2 + 16 * math.sqrt(2 * (m - 1))))
    return k, admissible.dusart_diameter_bound(k).value


@dataclass
class DusartComparison(utils.DataclassSerializationMixin):
    """The exact diameter of the primes-after-k tuple next to its Dusart-type bound."""

    k: int
    exact_diameter: int
    bound: float
    ratio: float
    holds: bool
    valid: bool


def dusart_comparison(k: int, table: primes.SieveTable | None = None, budget: int = primes.DEFAULT_BUDGET):
    """Compare the diameter of construct_primes_gt_k(k) with dusart_diameter_bound(k)."""
    exact = admissible.construct_primes_gt_k(k, table=table, budget=budget).diameter
    bound = admissible.dusart_diameter_bound(k)
    return DusartComparison(
        k=k,
        exact_diameter=exact,
        bound=bound.value,
        ratio=exact / bound.value,
        holds=exact <= bound.value,
        valid=bound.valid,
    )


@dataclass
class ConstantsReport(utils.DataclassSerializationMixin):
    """Every explicit constant for one set of inputs."""

    r: int
    m: int
    delta: Fraction
    B: int
    theta: float
    rho: float
    k_min: float
    k_chosen: int
    nu: NuResult
    script_L: float
    gap_bound: float
    C_of_m: float
    lemma_bound: float | None
    final1_holds: bool
    final2: InequalityCheck
    final3: InequalityCheck
    k_chosen_valid_for_dusart: bool
    notes: list[str] = field(default_factory=list)


def report(r: int, m: int, delta: float, B: int, theta: float, k: int | None = None) -> ConstantsReport:
    """
    Evaluate every constant for (r, m, delta, B, theta).

    rho is m - 1. Unless k is given, k_chosen is the smallest integer above
    k_min (and at least e^r). nu uses the lemma bound at A = log(k)/r as the
    lower bound for M_{k,eta}. C_of_m is the Dusart-type diameter bound at
    k_chosen.
    """
    if m < 2:
        raise errors.ParameterError(f"m must be at least 2, not {m}")
    rho = m - 1
    k_min = k_threshold(r, rho, delta, B, theta)
    if k is None:
        k = max(math.floor(k_min) + 1, math.ceil(math.exp(r)))
    elif k < k_min:
        logger.warning("k=%d is below the threshold k_min=%.6g.", k, k_min)

    params = functional.choose_A_eta(k, r, theta)
    M_lower = params.lemma_bound if params.lemma_bound is not None else 0.0
    script_L, gap_bound = script_L_and_gap(r, m, delta, B, theta)
    diameter_bound = admissible.dusart_diameter_bound(k)

    return ConstantsReport(
        r=r,
        m=m,
        delta=Fraction(delta).limit_denominator(10**12),
        B=B,
        theta=theta,
        rho=rho,
        k_min=k_min,
        k_chosen=k,
        nu=nu(k, r, delta, B, theta, M_lower),
        script_L=script_L,
        gap_bound=gap_bound,
        C_of_m=diameter_bound.value,
        lemma_bound=params.lemma_bound,
        final1_holds=bool(params.final1_holds),
        final2=final2_check(k, r, theta),
        final3=final3_check(k, r, rho, delta, B, theta),
        k_chosen_valid_for_dusart=diameter_bound.valid,
        notes=[EPSILON_NOTE, "nu is a lower bound: M_{k,eta} is replaced by the closed-form lemma bound"],
    )

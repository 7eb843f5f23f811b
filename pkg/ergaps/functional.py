"""
The Maynard-Tao functional for the product test function.

F(x_1, ..., x_k) = prod_i g(k x_i) on {x_i <= min(T/k, 1), sum x_i <= 1}, where
g(t) = 1/(1 + At) on [0, T] and T = (e^A - 1)/A. All integrals are computed in
the variables u_i = k x_i, where the region is {u_i <= min(T, k), sum u_i <= k}
and the one-dimensional integrals of g and g^2 have closed forms:

    int_0^c g(u) du   = log(1 + Ac)/A
    int_0^c g(u)^2 du = c/(1 + Ac)
"""

from dataclasses import dataclass
import enum
import logging
import math
import warnings

import numpy as np
from scipy import integrate

from ergaps import errors, events, utils
from ergaps.logs import LogTimer

logger = logging.getLogger(__name__)
timer = LogTimer(logger)

MAX_QUADRATURE_K = 4
MAX_MONTECARLO_K = 64

DEFAULT_TOLERANCE = 1e-10
DEFAULT_QUAD_LIMIT = 200
DEFAULT_MC_BUDGET = 200_000
DEFAULT_MC_CHUNK_SIZE = 2**15
DEFAULT_SEED = 20190601

#: Tolerance of the closed-form identities checked by integral_identities_check.
IDENTITY_TOLERANCE = 1e-9


class Method(enum.Enum):
    """Numerical method for I_k and J_sum."""

    QUADRATURE = "quadrature"
    MONTECARLO = "montecarlo"


class Sampler(enum.Enum):
    """Sampling density used by the Monte Carlo method."""

    IMPORTANCE = "importance"
    UNIFORM = "uniform"


@dataclass
class FunctionalParams(utils.DataclassSerializationMixin):
    """
    The parameters (k, r, theta, A, T, sigma, eta) of the functional.

    lemma_bound and final1_holds are filled in by choose_A_eta.
    """

    k: int
    r: int
    theta: float
    A: float
    T: float
    sigma: float
    eta: float
    lemma_bound: float | None = None
    final1_holds: bool | None = None

    @property
    def cap(self) -> float:
        """The upper limit of each u_i = k x_i."""
        return min(self.T, float(self.k))


@dataclass
class Estimate(utils.DataclassSerializationMixin):
    """A numerical estimate with a conservative error bar."""

    estimate: float
    error_bar: float
    method: str
    samples: int | None = None


@dataclass
class LemmaBound(utils.DataclassSerializationMixin):
    """The closed-form lower bound for J_sum/I_k, when its condition holds."""

    k: int
    A: float
    condition: float
    available: bool
    value: float | None = None


@dataclass
class IntegralIdentities(utils.DataclassSerializationMixin):
    """Quadrature values of the integrals of g, g^2 and t*g^2 over [0, T] and their closed forms."""

    A: float
    m0: float
    m1: float
    m2: float
    expected_m0: float
    expected_m1: float
    expected_m2: float

    @property
    def max_error(self) -> float:
        return max(
            abs(self.m0 - self.expected_m0), abs(self.m1 - self.expected_m1), abs(self.m2 - self.expected_m2)
        )


@dataclass
class Final1Check(utils.DataclassSerializationMixin):
    """Whether the lemma bound at A = log(k)/r reaches log(k)/r - 1."""

    k: int
    r: int
    A: float
    lemma_bound: float | None
    target: float
    slack: float | None
    holds: bool


def _check_A(A: float) -> None:
    if not A > 0:
        raise errors.ParameterError(f"A must be positive, not {A}")


def compute_T_sigma(A: float) -> tuple[float, float]:
    """Return T = (e^A - 1)/A and sigma = (A - 1 + e^-A)/A^2."""
    _check_A(A)
    T = math.expm1(A) / A
    sigma = (math.expm1(-A) + A) / A**2
    return T, sigma


def g_eval(A: float, t: float) -> float:
    """Return g(t) = 1/(1 + At) for 0 <= t <= T and 0 elsewhere."""
    T, _ = compute_T_sigma(A)
    return 1.0 / (1.0 + A * t) if 0 <= t <= T else 0.0


def _G1(A: float, c):
    """The integral of g over [0, c] (vectorised)."""
    return np.log1p(A * c) / A


def _G2(A: float, c):
    """The integral of g^2 over [0, c] (vectorised)."""
    return c / (1.0 + A * c)


def _quad(func, a: float, b: float, tolerance: float, limit: int, points=None) -> tuple[float, float]:
    """Run scipy's adaptive quadrature, turning non-convergence into a NumericalError."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            return integrate.quad(func, a, b, epsabs=tolerance, epsrel=tolerance, limit=limit, points=points)
        except integrate.IntegrationWarning as warning:
            raise errors.NumericalError(f"Quadrature over [{a}, {b}] did not converge: {warning}") from warning


def integral_identities_check(
    A: float, tolerance: float = DEFAULT_TOLERANCE, limit: int = DEFAULT_QUAD_LIMIT
) -> IntegralIdentities:
    """
    Integrate g, g^2 and t*g^2 over [0, T] numerically.

    The closed forms are 1, (1 - e^-A)/A and sigma. A NumericalError is raised
    when a quadrature does not converge or lands further than 1e-9 from its
    closed form.
    """
    T, sigma = compute_T_sigma(A)
    m0, _ = _quad(lambda t: 1.0 / (1.0 + A * t), 0.0, T, tolerance, limit)
    m1, _ = _quad(lambda t: 1.0 / (1.0 + A * t) ** 2, 0.0, T, tolerance, limit)
    m2, _ = _quad(lambda t: t / (1.0 + A * t) ** 2, 0.0, T, tolerance, limit)
    result = IntegralIdentities(
        A=A, m0=m0, m1=m1, m2=m2, expected_m0=1.0, expected_m1=-math.expm1(-A) / A, expected_m2=sigma
    )
    if result.max_error > IDENTITY_TOLERANCE:
        raise errors.NumericalError(f"Integral identities for A={A} are off by {result.max_error:.3e}")
    return result


def make_params(k: int, r: int, theta: float, A: float) -> FunctionalParams:
    """Build FunctionalParams for an explicit A."""
    if k < 1:
        raise errors.ParameterError(f"k must be positive, not {k}")
    if r < 2:
        raise errors.ParameterError(f"r must be at least 2, not {r}")
    if not 0 < theta <= 0.5:
        raise errors.ParameterError(f"theta must be in (0, 1/2], not {theta}")
    T, sigma = compute_T_sigma(A)
    return FunctionalParams(k=k, r=r, theta=theta, A=A, T=T, sigma=sigma, eta=T * theta / (2 * k))


def ratio_lower_bound(k: int, A: float) -> LemmaBound:
    """
    Evaluate the closed-form lower bound for J_sum/I_k.

    When 1 - T/k - sigma > 0 the ratio is at least
    A(1 - A e^A / (k (1 - A/(e^A - 1) - e^A/k)^2)). The value may be negative.
    Otherwise the bound is reported as unavailable.
    """
    if k < 2:
        raise errors.ParameterError(f"k must be at least 2, not {k}")
    T, sigma = compute_T_sigma(A)
    condition = 1 - T / k - sigma
    if condition <= 0:
        return LemmaBound(k=k, A=A, condition=condition, available=False)
    inner = 1 - A / math.expm1(A) - math.exp(A) / k
    value = A * (1 - A * math.exp(A) / (k * inner**2))
    return LemmaBound(k=k, A=A, condition=condition, available=True, value=value)


def final1_check(k: int, r: int) -> Final1Check:
    """Compare the lemma bound at A = log(k)/r with log(k)/r - 1."""
    A = math.log(k) / r
    bound = ratio_lower_bound(k, A)
    target = A - 1
    if not bound.available:
        return Final1Check(k=k, r=r, A=A, lemma_bound=None, target=target, slack=None, holds=False)
    slack = bound.value - target
    return Final1Check(k=k, r=r, A=A, lemma_bound=bound.value, target=target, slack=slack, holds=slack >= 0)


def choose_A_eta(k: int, r: int, theta: float) -> FunctionalParams:
    """
    Choose A = log(k)/r and eta = T*theta/(2k).

    Requires k >= ceil(e^r). Records the lemma bound and whether it reaches
    log(k)/r - 1.
    """
    if r < 2:
        raise errors.ParameterError(f"r must be at least 2, not {r}")
    if k < math.ceil(math.exp(r)):
        raise errors.ParameterError(f"k={k} is below e^r (need k >= {math.ceil(math.exp(r))} for r={r})")
    params = make_params(k, r, theta, math.log(k) / r)
    check = final1_check(k, r)
    params.lemma_bound = check.lemma_bound
    params.final1_holds = check.holds
    return params


def _check_method_limit(params: FunctionalParams, method: Method) -> None:
    limit = MAX_QUADRATURE_K if method is Method.QUADRATURE else MAX_MONTECARLO_K
    if params.k > limit:
        raise errors.ParameterError(f"{method.value} supports k <= {limit}, not k={params.k}")


#
# Quadrature
#


def _nested_quad(params: FunctionalParams, depth: int, s: float, last, tolerance: float, limit: int):
    """
    Integrate prod g(u_i)^2 * last(remaining) over depth variables with sum u_i <= s.

    last(c) is the closed form for the final variable, capped at c.
    """
    A, cap = params.A, params.cap
    upper = min(cap, s)
    if upper <= 0:
        return 0.0, 0.0
    if depth == 1:
        return float(last(upper)), 0.0

    # The inner integrals switch from capped to uncapped where s - u is a multiple of cap.
    kinks = [s - j * cap for j in range(1, depth)]
    points = [x for x in kinks if 0 < x < upper] or None

    def integrand(u):
        value, _ = _nested_quad(params, depth - 1, s - u, last, tolerance, limit)
        return value / (1.0 + A * u) ** 2

    return _quad(integrand, 0.0, upper, tolerance, limit, points=points)


def _quadrature(params: FunctionalParams, which: str, tolerance: float, limit: int) -> Estimate:
    k, A = params.k, params.A
    if which == "I":
        last, scale = (lambda c: _G2(A, c)), float(k) ** -k
    else:
        last, scale = (lambda c: _G1(A, c) ** 2), float(k) ** -(k + 1)

    fine, abserr = _nested_quad(params, k, float(k), last, tolerance, limit)
    coarse, _ = _nested_quad(params, k, float(k), last, tolerance * 100, limit)
    error_bar = abs(fine - coarse) + abserr + tolerance
    return Estimate(estimate=scale * fine, error_bar=scale * error_bar, method=Method.QUADRATURE.value)


#
# Monte Carlo
#


def _sample_coordinates(params: FunctionalParams, rng: np.random.Generator, n: int, sampler: Sampler):
    """Return an (n, k) sample of u and the per-sample log-weight of each coordinate column."""
    A, cap = params.A, params.cap
    y = rng.random((n, params.k))
    if sampler is Sampler.IMPORTANCE:
        # Inverse of the CDF u/(1 + Au)/Z of the density g(u)^2/Z on [0, cap].
        Z = _G2(A, cap)
        u = y * Z / (1.0 - A * y * Z)
        weights = np.full_like(u, Z)
    else:
        u = y * cap
        weights = cap / (1.0 + A * u) ** 2
    return u, weights


def _mc_chunk(params: FunctionalParams, which: str, m: int, sampler: Sampler):
    """Return a function evaluating one chunk: (sum, sum of squares, n)."""
    k, A, cap = params.k, params.A, params.cap

    def run(task):
        chunk_no, seed_seq, n = task
        rng = np.random.default_rng(seed_seq)
        u, weights = _sample_coordinates(params, rng, n, sampler)
        if which == "I":
            values = np.prod(weights, axis=1) * (u.sum(axis=1) <= k)
        else:
            others = np.delete(np.arange(k), m - 1)
            remaining = np.clip(k - u[:, others].sum(axis=1), 0.0, cap)
            values = np.prod(weights[:, others], axis=1) * _G1(A, remaining) ** 2
        events.trigger(events.Event.MC_CHUNK_END, {"chunk_no": chunk_no, "samples": n}, logger)
        return float(values.sum()), float((values * values).sum()), n

    return run


def _montecarlo(
    params: FunctionalParams,
    which: str,
    budget: int,
    seed: int,
    chunk_size: int,
    workers: int,
    sampler: Sampler,
    m: int = 1,
) -> Estimate:
    if budget < 2:
        raise errors.ParameterError(f"The Monte Carlo budget must be at least 2 samples, not {budget}")
    sizes = list(utils.chunk_sizes(budget, chunk_size))
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    tasks = list(zip(range(len(sizes)), seeds, sizes))

    with timer("Monte Carlo %s_%d (%d samples)", which, params.k, budget):
        chunks = utils.parallel_map(_mc_chunk(params, which, m, sampler), tasks, workers=workers)

    total = sum(c[0] for c in chunks)
    total_sq = sum(c[1] for c in chunks)
    mean = total / budget
    variance = max(total_sq / budget - mean * mean, 0.0) * budget / (budget - 1)
    standard_error = math.sqrt(variance / budget)

    k = params.k
    scale = float(k) ** -k if which == "I" else float(k) ** -(k + 1)
    return Estimate(
        estimate=scale * mean,
        error_bar=scale * 3 * standard_error,
        method=Method.MONTECARLO.value,
        samples=budget,
    )


def I_k(
    params: FunctionalParams,
    method: Method | str = Method.QUADRATURE,
    budget: int | None = None,
    seed: int = DEFAULT_SEED,
    tolerance: float = DEFAULT_TOLERANCE,
    chunk_size: int = DEFAULT_MC_CHUNK_SIZE,
    workers: int = 1,
    sampler: Sampler | str = Sampler.IMPORTANCE,
) -> Estimate:
    """
    Estimate I_k(F), the integral of F^2.

    :param params: The functional parameters.
    :param method: (optional) quadrature (k <= 4) or montecarlo (k <= 64).
    :param budget: (optional) Subdivision limit per quadrature, or the number
        of Monte Carlo samples.
    :param seed: (optional) Seed of the Monte Carlo streams.
    :param tolerance: (optional) Tolerance per quadrature axis.
    :param chunk_size: (optional) Samples per independently seeded chunk.
    :param workers: (optional) Threads evaluating chunks. Never changes the result.
    :param sampler: (optional) importance (default) or uniform sampling.
    """
    method, sampler = Method(method), Sampler(sampler)
    _check_method_limit(params, method)
    if method is Method.QUADRATURE:
        return _quadrature(params, "I", tolerance, budget or DEFAULT_QUAD_LIMIT)
    return _montecarlo(params, "I", budget or DEFAULT_MC_BUDGET, seed, chunk_size, workers, sampler)


def J_m(
    params: FunctionalParams,
    m: int = 1,
    budget: int | None = None,
    seed: int = DEFAULT_SEED,
    chunk_size: int = DEFAULT_MC_CHUNK_SIZE,
    workers: int = 1,
    sampler: Sampler | str = Sampler.IMPORTANCE,
) -> Estimate:
    """
    Estimate J_k^(m)(F) by Monte Carlo, integrating out coordinate m.

    F is symmetric, so every m gives the same value up to sampling error.
    """
    if not 1 <= m <= params.k:
        raise errors.ParameterError(f"m must be in [1, {params.k}], not {m}")
    _check_method_limit(params, Method.MONTECARLO)
    return _montecarlo(
        params, "J", budget or DEFAULT_MC_BUDGET, seed, chunk_size, workers, Sampler(sampler), m=m
    )


def J_sum(
    params: FunctionalParams,
    method: Method | str = Method.QUADRATURE,
    budget: int | None = None,
    seed: int = DEFAULT_SEED,
    tolerance: float = DEFAULT_TOLERANCE,
    chunk_size: int = DEFAULT_MC_CHUNK_SIZE,
    workers: int = 1,
    sampler: Sampler | str = Sampler.IMPORTANCE,
) -> Estimate:
    """Estimate the sum over m of J_k^(m)(F), which is k * J_k^(1)(F) by symmetry (see I_k for the options)."""
    method, sampler = Method(method), Sampler(sampler)
    _check_method_limit(params, method)
    if method is Method.QUADRATURE:
        single = _quadrature(params, "J", tolerance, budget or DEFAULT_QUAD_LIMIT)
    else:
        single = _montecarlo(params, "J", budget or DEFAULT_MC_BUDGET, seed, chunk_size, workers, sampler)
    k = params.k
    return Estimate(
        estimate=k * single.estimate, error_bar=k * single.error_bar, method=single.method, samples=single.samples
    )


@dataclass
class FunctionalReport(utils.DataclassSerializationMixin):
    """The functional values at one parameter set, with the ratio and its lemma bound."""

    params: FunctionalParams
    I_k: Estimate
    J_sum: Estimate
    ratio: float
    ratio_error: float
    lemma_bound: float | None
    condition_ok: bool


def evaluate(params: FunctionalParams, **options) -> FunctionalReport:
    """Compute I_k, J_sum and their ratio, with error propagated from both estimates."""
    i_k = I_k(params, **options)
    j_sum = J_sum(params, **options)
    ratio = j_sum.estimate / i_k.estimate
    ratio_error = ratio * (j_sum.error_bar / j_sum.estimate + i_k.error_bar / i_k.estimate)
    bound = ratio_lower_bound(params.k, params.A) if params.k >= 2 else None
    return FunctionalReport(
        params=params,
        I_k=i_k,
        J_sum=j_sum,
        ratio=ratio,
        ratio_error=ratio_error,
        lemma_bound=bound.value if bound else None,
        condition_ok=bool(bound and bound.available),
    )

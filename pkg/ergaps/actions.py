"""Functions to perform actions pulling multiple components together."""

import logging
import math
from typing import Any

import numpy as np

from ergaps import admissible, conf, constants, equidist, explorer, functional, primes, utils
from ergaps.admissible import Tuple
from ergaps.logs import LogTimer
from ergaps.primes import PrimeSetSpec, SieveTable

logger = logging.getLogger(__name__)
timer = LogTimer(logger, log_level=logging.INFO)

#: k values whose primes-after-k diameter is compared with the Dusart-type bound in report-all.
DUSART_SURROGATE_KS = (1_000, 10_000, 100_000)

#: The grid of (r, k) cells of the final1 check in report-all.
FINAL1_GRID_RS = (2, 3, 4)
FINAL1_GRID_KS = (100, 1_000, 10_000)


class App:
    """Central Application for ErGaps."""

    settings: conf.Settings

    def __init__(self, settings: conf.Settings = None):
        self.settings = settings or conf.Settings()
        self._tables: list[SieveTable] = []

    def __getattr__(self, name: str) -> Any:
        """Pull any attributes that don't exist on App from Settings."""
        if name.startswith("_"):
            raise AttributeError(name)
        return getattr(self.settings, name)

    def sieve(self, limit: int) -> SieveTable:
        """
        Return a table of all primes covering at least [2, limit].

        Tables are kept for the lifetime of the App, and any table that is large
        enough is reused.
        """
        limit = max(2, limit)
        for table in self._tables:
            if table.limit >= limit:
                return table
        options = self.settings.sieve_options
        table = primes.sieve_primes(
            limit,
            budget=options.budget,
            segment_size=options.segment_size,
            cache_dir=options.cache_dir,
        )
        self._tables.append(table)
        return table

    #
    # Constants
    #

    def constants(self, r: int, m: int, delta: float, B: int, theta: float, k: int | None = None) -> dict:
        """Evaluate every explicit constant for (r, m, delta, B, theta)."""
        return constants.report(r, m, delta, B, theta, k=k).to_dict()

    def example_c(self, m: int) -> dict:
        """Evaluate the class group example for m."""
        k, C = constants.example_C(m)
        return {"k": k, "C": C, "C_over_k": C / k, "dusart_valid": admissible.dusart_diameter_bound(k).valid}

    #
    # Tuples
    #

    def primes_after_k(self, k: int) -> Tuple:
        """Return the tuple of the k smallest primes exceeding k."""
        required = admissible.primes_gt_k_limit_estimate(k)
        if required > self.settings.sieve_options.budget:
            return admissible.construct_primes_gt_k(k, budget=self.settings.sieve_options.budget)
        return admissible.construct_primes_gt_k(k, table=self.sieve(required))

    def narrowest(self, k: int, max_diameter: int | None = None) -> Tuple | None:
        """Search for the narrowest admissible k-tuple."""
        return admissible.narrowest_search(
            k,
            max_diameter=max_diameter,
            node_budget=self.settings.numeric_options.search_node_budget,
            workers=self.settings.workers,
        )

    #
    # Functional
    #

    def functional(
        self,
        k: int,
        r: int,
        theta: float,
        A: float | None = None,
        method: str = "quadrature",
        budget: int | None = None,
        sampler: str = "importance",
    ) -> dict:
        """Evaluate the functional at A (default: log(k)/r) with the given method."""
        params = functional.choose_A_eta(k, r, theta) if A is None else functional.make_params(k, r, theta, A)
        numeric = self.settings.numeric_options
        if budget is None:
            quadrature = functional.Method(method) is functional.Method.QUADRATURE
            budget = numeric.quad_limit if quadrature else numeric.mc_budget
        report = functional.evaluate(
            params,
            method=method,
            budget=budget,
            seed=self.settings.seed,
            tolerance=numeric.quad_tolerance,
            chunk_size=numeric.mc_chunk_size,
            workers=self.settings.workers,
            sampler=sampler,
        )
        return {
            "k": k,
            "r": r,
            "theta": theta,
            "A": params.A,
            "T": params.T,
            "sigma": params.sigma,
            "eta": params.eta,
            "method": method,
            "budget": budget,
            "I_k": report.I_k.estimate,
            "I_k_error": report.I_k.error_bar,
            "J_sum": report.J_sum.estimate,
            "J_sum_error": report.J_sum.error_bar,
            "ratio": report.ratio,
            "ratio_error": report.ratio_error,
            "lemma_bound": report.lemma_bound,
            "condition_ok": report.condition_ok,
        }

    #
    # E_r numbers
    #

    def enumerate_er(self, cfg: explorer.ErConfig) -> np.ndarray:
        """Enumerate E_r(P), or the constrained E_h set, for cfg."""
        if cfg.is_constrained:
            first_min = max(2, utils.ceil_power(cfg.N, cfg.eta))
            table = self.sieve(2 * cfg.N // first_min ** (cfg.h - 1))
        else:
            table = self.sieve(cfg.X // 2 ** (cfg.r - 1))
        return explorer.enumerate_Er(
            cfg, table, budget=self.settings.sieve_options.budget, workers=self.settings.workers
        )

    def gaps(self, values, m: int = 1) -> explorer.GapScanResult:
        """Scan a list for its smallest m-window."""
        return explorer.gap_scan(values, m)

    def T_N(self, N: int, r: int, eta: float, spec: PrimeSetSpec) -> explorer.TNReport:
        """Compute T_N against its lower bound."""
        return explorer.compute_T_N(N, r, eta, spec, self.sieve(2 * N), workers=self.settings.workers)

    def conv_check(
        self,
        X: int,
        spec: PrimeSetSpec,
        range_r_minus_1: list[tuple[int, int]],
        range_r: tuple[int, int],
        c: int | None = None,
    ) -> dict:
        """Check the convolution identity and the dyadic splitting identity up to X."""
        table = self.sieve(X)
        result = explorer.convolution_delta_check(X, spec, range_r_minus_1, range_r, table, c=c).to_dict()
        blocks = explorer.dyadic_split_check(X, spec, range_r_minus_1, range_r, table)
        result["dyadic_blocks"] = [block.to_dict() for block in blocks]
        result["dyadic_holds"] = all(block.equal for block in blocks)
        return result

    #
    # Equidistribution
    #

    def sw(self, x: int, q: int, spec: PrimeSetSpec) -> dict:
        """Return the Siegel-Walfisz error for modulus q at x."""
        table = self.sieve(x)
        error = equidist.sw_error(table, spec, x, q)
        main = primes.pi_P(table, spec, x)
        return {"x": x, "q": q, "error": error, "main_term": main, "ratio": error / main if main else 0.0}

    def bv(self, x: int, theta: float, spec: PrimeSetSpec) -> equidist.BVReport:
        """Return the Bombieri-Vinogradov error sum at x."""
        return equidist.bv_sum(
            self.sieve(x),
            spec,
            x,
            theta,
            q_cap=self.settings.numeric_options.q_cap,
            workers=self.settings.workers,
        )

    def bv_er(
        self, N: int, u: float, r: int, ranges: list[tuple[float, float]], spec: PrimeSetSpec, theta_exponent: float
    ) -> equidist.BVReport:
        """Return the error sum for products of r primes from the given exponent ranges."""
        return equidist.bv_sum_beta_r(
            N,
            u,
            r,
            ranges,
            spec,
            theta_exponent,
            self.sieve(utils.ceil_power(N, u)),
            q_cap=self.settings.numeric_options.q_cap,
            workers=self.settings.workers,
        )

    def decay(self, xs: list[int], theta: float, spec: PrimeSetSpec) -> list[dict]:
        """Return the relative Bombieri-Vinogradov error for each x."""
        reports = equidist.decay_report(
            self.sieve(max(xs)),
            spec,
            xs,
            theta,
            q_cap=self.settings.numeric_options.q_cap,
            workers=self.settings.workers,
        )
        return [
            {"x": report.x, "sum": report.sum, "main_term": report.main_term, "ratio": report.ratio}
            for report in reports
        ]

    #
    # Everything
    #

    def report_all(self) -> dict:
        """Reproduce every explicit number and run the desk-scale checks at their default sizes."""
        results = {}
        with timer("Full report"):
            results["threshold_specialisation"] = [
                {
                    "m": m,
                    "k_threshold": constants.k_threshold(
                        2, m - 1, constants.EXAMPLE_DELTA, constants.EXAMPLE_B, constants.EXAMPLE_THETA
                    ),
                    "closed_form": math.exp(2 + 16 * math.sqrt(2 * (m - 1))),
                }
                for m in range(2, 11)
            ]
            results["example_c"] = self.example_c(2)
            results["constants"] = self.constants(
                2, 2, constants.EXAMPLE_DELTA, constants.EXAMPLE_B, constants.EXAMPLE_THETA
            )
            results["integral_identities"] = [
                functional.integral_identities_check(A).to_dict() for A in (0.5, 1.0, 2.0, 5.0)
            ]
            results["final1"] = [
                functional.final1_check(k, r).to_dict()
                for r in FINAL1_GRID_RS
                for k in (math.ceil(math.exp(r)),) + FINAL1_GRID_KS
            ]
            results["functional"] = [
                self.functional(k, 2, 0.5, A=A, method=method)
                for k in (2, 3)
                for A in (0.5, 1.0)
                for method in ("quadrature", "montecarlo")
            ]
            results["tuples"] = {
                "primes_after_5": list(self.primes_after_k(5).offsets),
                "narrowest_5": list(self.narrowest(5).offsets),
                "admissible": {
                    k: bool(admissible.is_admissible(self.primes_after_k(k))) for k in (5, 50, 1_000)
                },
            }
            results["dusart_surrogate"] = [
                constants.dusart_comparison(k, table=self.sieve(admissible.primes_gt_k_limit_estimate(k))).to_dict()
                for k in DUSART_SURROGATE_KS
            ]
            all_primes = PrimeSetSpec.all_primes()
            e2 = self.enumerate_er(explorer.ErConfig(r=2, X=10**6, spec=all_primes))
            scan = explorer.gap_scan(e2, 1)
            results["e2_gaps"] = {
                "first": [int(n) for n in e2[:6]],
                "min_gap": scan.min_window,
                "pairs_within_6": scan.count_within(6),
            }
            results["T_N"] = self.T_N(10**6, 2, 0.15, all_primes).to_dict()
            results["convolution"] = self.conv_check(10**5, all_primes, [(2, 100)], (101, 10**5))
            results["decay"] = self.decay([10**4, 10**5, 10**6], 0.25, all_primes)
        return results

"""Brute-force oracles and shared fixtures for the test-suite."""

from itertools import combinations
import math
import shutil
import tempfile
from unittest import TestCase as TestCase_orig

import sympy

from ergaps import events
from ergaps.primes import PrimeSetSpec


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def trial_division_primes(limit: int) -> list[int]:
    return [n for n in range(2, limit + 1) if trial_division_is_prime(n)]


def trial_division_factors(n: int) -> list[int]:
    """Prime factors of n with multiplicity."""
    factors = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors.append(d)
            n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def brute_force_Er(X: int, r: int, spec: PrimeSetSpec = PrimeSetSpec()) -> list[int]:
    result = []
    for n in range(2, X + 1):
        factors = trial_division_factors(n)
        if len(factors) == r and len(set(factors)) == r and all(spec.contains(p) for p in factors):
            result.append(n)
    return result


def brute_force_T_N(N: int, r: int, eta: float, spec: PrimeSetSpec = PrimeSetSpec()) -> int:
    """
    Count pairs (q, t) directly.

    q = p_1 ... p_{r-1} with N^eta <= p_1 < ... < p_{r-1} and q^2 < N, and t a
    prime of P with t^2 >= N and N <= qt < 2N.
    """
    members = {p for p in sympy.primerange(2, 2 * N) if spec.contains(p)}
    small = sorted(p for p in members if p >= N**eta - 1e-9 and p * p < N)
    total = 0
    for factors in combinations(small, r - 1):
        q = math.prod(factors)
        if q * q >= N:
            continue
        for t in range(-(-N // q), -(-2 * N // q)):
            if t in members and t * t >= N and N <= q * t < 2 * N:
                total += 1
    return total


def brute_force_sw_error(x: int, q: int, spec: PrimeSetSpec = PrimeSetSpec()) -> float:
    members = [p for p in trial_division_primes(x) if spec.contains(p)]
    main = len(members) / sum(1 for a in range(q) if math.gcd(a, q) == 1)
    return max(
        abs(sum(1 for p in members if p % q == a) - main) for a in range(q) if math.gcd(a, q) == 1
    )


def brute_force_beta_r_error(elements: list[int], q: int) -> float:
    coprime_classes = [a for a in range(q) if math.gcd(a, q) == 1]
    main = sum(1 for n in elements if math.gcd(n, q) == 1) / len(coprime_classes)
    return max(abs(main - sum(1 for n in elements if n % q == a)) for a in coprime_classes)


class TestCase(TestCase_orig):
    """A TestCase with a temporary directory and a clean event registry."""

    TEST_DIR: str

    def tearDown(self):
        events.clear()
        super().tearDown()

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.TEST_DIR = tempfile.mkdtemp(suffix=".ergaps-test")

    @classmethod
    def tearDownClass(cls):
        super().tearDownClass()
        shutil.rmtree(cls.TEST_DIR)

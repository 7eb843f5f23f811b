"""Small arithmetic helpers: totients, squarefree tests and factorisations."""

import sympy
from sympy.ntheory import factorint, primerange, totient

from ergaps import errors


def phi(n: int) -> int:
    """Return Euler's totient of n."""
    if n < 1:
        raise errors.ParameterError(f"phi is only defined for positive integers, not {n}")
    return int(totient(n))


def is_squarefree(n: int) -> bool:
    """Return True if no square of a prime divides n."""
    if n < 1:
        return False
    return all(exponent == 1 for exponent in factorint(n).values())


def prime_factors(n: int) -> list[int]:
    """Return the distinct prime factors of n in ascending order."""
    return sorted(factorint(n))


def small_primes(upto: int) -> list[int]:
    """Return the primes <= upto."""
    return list(primerange(2, upto + 1))


def is_prime(n: int) -> bool:
    """Return True if n is prime."""
    return bool(sympy.isprime(n))


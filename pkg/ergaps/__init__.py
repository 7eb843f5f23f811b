"""Explicit constants and desk-scale checks for bounded gaps between products of primes."""

__version__ = "1.0.0"

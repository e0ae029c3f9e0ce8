"""Sieve-based prime utilities for the prime-divisor counting argument."""

from __future__ import annotations

from functools import lru_cache
from itertools import accumulate
from math import isqrt, log

from .errors import DomainError


@lru_cache(maxsize=8)
def sieve(limit: int) -> bytes:
    """Primality flags for 0..limit (Eratosthenes)."""
    if limit < 0:
        raise DomainError("sieve limit must be nonnegative")
    flags = bytearray([1]) * (limit + 1)
    flags[: min(2, limit + 1)] = bytes(min(2, limit + 1))
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return bytes(flags)


def is_prime(n: int) -> bool:
    return n >= 2 and bool(sieve(n)[n])


def prime_count(n: int) -> int:
    return sum(sieve(max(n, 0))) if n >= 2 else 0


def prime_bound_check(n: int) -> tuple[int, bool]:
    """(pi(n), pi(n) > n / ln n); the inequality is claimed for n >= 17."""
    if n < 2:
        raise DomainError(f"n / ln n is undefined or nonpositive for n = {n}")
    pi_n = prime_count(n)
    return pi_n, pi_n > n / log(n)


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    if hi < 2 or hi < lo:
        return []
    flags = sieve(hi)
    return [p for p in range(max(lo, 2), hi + 1) if flags[p]]


def verify_prime_bound(limit: int, start: int = 17) -> list[int]:
    """All n in start..limit with pi(n) <= n / ln n, from one sieve."""
    if start < 2:
        raise DomainError("the bound is checked from n = 2 upward")
    if limit < start:
        return []
    counts = list(accumulate(sieve(limit)))
    return [n for n in range(start, limit + 1) if counts[n] <= n / log(n)]

"""Elementary arithmetic building blocks: log-plus and the Mangoldt function."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError


def log_plus(x: float) -> float:
    """Positive part of the logarithm: log(x) for x >= 1, else 0.

    Always an upper bound for log(x) on x > 0.
    """
    if x < 0:
        raise PreconditionError(f"log_plus requires x >= 0, got {x}")
    if x >= 1.0:
        return math.log(x)
    return 0.0


def prime_power_split(n: int) -> tuple[int, int] | None:
    """Return (p, k) with n == p**k for prime p, or None."""
    if n < 2:
        return None
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            m, k = n, 0
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return (n, 1)


def mangoldt(n: int) -> float:
    """Mangoldt function: log(p) when n is a prime power p**k, else 0."""
    if n < 1:
        raise PreconditionError(f"mangoldt requires n >= 1, got {n}")
    pk = prime_power_split(n)
    return math.log(pk[0]) if pk else 0.0


@dataclass
class MangoldtTable:
    """Sieved prime-power descriptors up to `limit`.

    Values are stored exactly as (prime, exponent) pairs; the real value
    log(prime) is rendered on demand, so the 0-versus-log(p) dichotomy is
    never blurred by floating point.
    """

    limit: int
    _powers: dict[int, tuple[int, int]] = field(repr=False, default_factory=dict)
    _primes: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.limit < 1:
            raise PreconditionError("MangoldtTable limit must be positive")
        sieve = np.ones(self.limit + 1, dtype=bool)
        sieve[:2] = False
        for i in range(2, math.isqrt(self.limit) + 1):
            if sieve[i]:
                sieve[i * i :: i] = False
        self._primes = np.flatnonzero(sieve)
        powers = {}
        for p in self._primes.tolist():
            pk, k = p, 1
            while pk <= self.limit:
                powers[pk] = (p, k)
                pk *= p
                k += 1
        self._powers = powers

    @property
    def primes(self) -> np.ndarray:
        return self._primes

    def descriptor(self, n: int) -> tuple[int, int] | None:
        """(p, k) with n == p**k, or None when Lambda(n) == 0."""
        if not 1 <= n <= self.limit:
            raise PreconditionError(f"n={n} outside table limit {self.limit}")
        return self._powers.get(n)

    def value(self, n: int) -> float:
        d = self.descriptor(n)
        return math.log(d[0]) if d else 0.0

    def prime_powers(self) -> list[tuple[int, int, int]]:
        """All (n, p, k) with n = p**k <= limit, ascending in n."""
        return sorted((n, p, k) for n, (p, k) in self._powers.items())


_DEFAULT_TABLE: MangoldtTable | None = None


def default_table(limit: int = 10**6) -> MangoldtTable:
    """Shared table, built once and grown on demand."""
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None or _DEFAULT_TABLE.limit < limit:
        _DEFAULT_TABLE = MangoldtTable(limit)
    return _DEFAULT_TABLE

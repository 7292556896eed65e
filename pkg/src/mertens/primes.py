"""Prime generation, Moebius values, and factorial prime valuations.

Everything downstream (running sums, constants, bound checks) pulls its
primes from here.  The sieve is segmented and odd-only so that limits up
to 2^34 never materialize a full bitmap; segments tile [2, n) exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

# Odd entries per segment; one segment spans twice this many integers.
DEFAULT_SEGMENT_SIZE = 1 << 20

# Moebius tables beyond this are never needed: every series over n that
# uses mu truncates far earlier, and the linear-memory table stays small.
MOEBIUS_MAX = 10**7


@dataclass(frozen=True)
class PrimeSegment:
    """Primality bitmap for the interval [lo, hi).

    ``bits[i]`` covers the odd integer ``odd_base + 2*i`` where
    ``odd_base`` is the first odd integer >= lo.  The prime 2 is
    special-cased: it belongs to the segment whose interval contains it.
    """

    lo: int
    hi: int
    bits: np.ndarray

    @property
    def odd_base(self) -> int:
        return self.lo | 1

    def primes(self) -> np.ndarray:
        """Primes in [lo, hi), ascending, as int64."""
        odds = self.odd_base + 2 * np.flatnonzero(self.bits).astype(np.int64)
        if self.lo <= 2 < self.hi:
            return np.concatenate(([np.int64(2)], odds))
        return odds


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit by a plain Eratosthenes sieve (small limits)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> PrimeSegment:
    """Sieve the odd integers of [lo, hi) against the base primes."""
    odd_base = lo | 1
    count = max(0, (hi - odd_base + 1) // 2)
    bits = np.ones(count, dtype=bool)
    if odd_base == 1 and count:
        bits[0] = False
    for p in base:
        p = int(p)
        if p == 2:
            continue
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= hi:
            continue
        bits[(start - odd_base) // 2 :: p] = False
    return PrimeSegment(lo, hi, bits)


def iter_segments(n, segment_size=DEFAULT_SEGMENT_SIZE, workers=1):
    """Yield PrimeSegments tiling [2, n] in ascending order.

    Segments are independent units of work: with ``workers > 1`` they are
    sieved concurrently but always yielded in ascending order, so results
    are identical for any worker count.
    """
    n = int(n)
    if n < 2:
        return
    base = simple_sieve(math.isqrt(n))
    span = 2 * segment_size
    bounds = [(lo, min(lo + span, n + 1)) for lo in range(2, n + 1, span)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(lambda b: _sieve_segment(*b, base), bounds)
    else:
        for lo, hi in bounds:
            yield _sieve_segment(lo, hi, base)


def primes_up_to(n, segment_size=DEFAULT_SEGMENT_SIZE):
    """Stream the primes <= n in ascending order, each exactly once."""
    for seg in iter_segments(n, segment_size=segment_size):
        yield from (int(p) for p in seg.primes())


@dataclass(frozen=True)
class MoebiusTable:
    """mu(n) for 1 <= n <= n_max, values in {-1, 0, +1}."""

    n_max: int
    values: np.ndarray

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside table range [1, {self.n_max}]")
        return int(self.values[n])


def moebius_up_to(n: int) -> MoebiusTable:
    """Moebius function table via a sieve over the primes <= n.

    mu flips sign once per distinct prime factor and vanishes on any
    multiple of a prime square.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > MOEBIUS_MAX:
        raise ValueError(f"n={n} exceeds Moebius table cap {MOEBIUS_MAX}")
    values = np.ones(n + 1, dtype=np.int8)
    values[0] = 0
    for p in simple_sieve(n):
        p = int(p)
        values[p::p] *= -1
        if p * p <= n:
            values[p * p :: p * p] = 0
    return MoebiusTable(n, values)


def legendre_valuation(n: int, p: int) -> int:
    """Exponent of the prime p in n!."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"p={p} is not prime")
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total

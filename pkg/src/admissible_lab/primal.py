"""Primality testing and prime enumeration.

Below 2**64 every verdict is deterministic (strong-pseudoprime test with the
first twelve prime bases). Above it the best available verdict is
``PROBABLE_PRIME``; ``COMPOSITE`` is always correct.
"""

from __future__ import annotations

import enum
import functools
import math
import random
from dataclasses import dataclass
from typing import Iterator, Optional

DETERMINISTIC_LIMIT = 1 << 64
DEFAULT_SEGMENT_SIZE = 1 << 20
DEFAULT_ROUNDS = 8

# Strong-pseudoprime bases proven sufficient for n < 3.3 * 10**24.
_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 1000


class SegmentTooLarge(ValueError):
    """Requested sieve range exceeds the configured segment size."""


class PrimalityStatus(str, enum.Enum):
    PRIME = "Prime"
    PROBABLE_PRIME = "ProbablePrime"
    COMPOSITE = "Composite"


@dataclass(frozen=True)
class PrimalityVerdict:
    status: PrimalityStatus
    witness: Optional[int] = None

    @property
    def is_prime(self) -> bool:
        """True for both proven and probable primes."""
        return self.status is not PrimalityStatus.COMPOSITE

    @property
    def proven(self) -> bool:
        return self.status is not PrimalityStatus.PROBABLE_PRIME


def primes_up_to(n: int) -> list[int]:
    """Return the primes <= n in ascending order."""
    if n < 2:
        return []
    flags = bytearray(b"\x01") * (n + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(flags) if v]


_SMALL_PRIMES = primes_up_to(_TRIAL_LIMIT)
TABLE_LIMIT = 1 << 21


@functools.cache
def _prime_table() -> bytes:
    # read-only after construction, safe to share between threads
    flags = bytearray(TABLE_LIMIT)
    for p in primes_up_to(TABLE_LIMIT - 1):
        flags[p] = 1
    return bytes(flags)


def _decompose(n: int) -> tuple[int, int]:
    # n - 1 = d * 2**s with d odd
    d = n - 1
    s = (d & -d).bit_length() - 1
    return d >> s, s


def _strong_test(n: int, a: int, d: int, s: int) -> tuple[bool, Optional[int]]:
    """One strong-pseudoprime round.

    Returns ``(passed, factor)``; ``factor`` is a nontrivial divisor when a
    nontrivial square root of 1 turned up along the way.
    """
    a %= n
    if a == 0:
        return True, None
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True, None
    for _ in range(s - 1):
        y = x * x % n
        if y == n - 1:
            return True, None
        if y == 1:
            g = math.gcd(x - 1, n)
            return False, g if 1 < g < n else None
        x = y
    if x * x % n == 1:
        g = math.gcd(x - 1, n)
        return False, g if 1 < g < n else None
    return False, None


def _small_factor(n: int) -> Optional[int]:
    for p in _SMALL_PRIMES:
        if p * p > n:
            return None
        if n % p == 0:
            return p
    return None


def is_prime_64(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2**64; values below 2 are not prime."""
    if n < 2:
        return False
    if n >= DETERMINISTIC_LIMIT:
        raise ValueError("is_prime_64 requires n < 2**64; use is_probable_prime")
    if n < TABLE_LIMIT:
        return bool(_prime_table()[n])
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return False
    d, s = _decompose(n)
    return all(_strong_test(n, a, d, s)[0] for a in _BASES_64)


def is_probable_prime(n: int, rounds: int = DEFAULT_ROUNDS) -> PrimalityVerdict:
    """Classify ``n`` as Prime, ProbablePrime or Composite.

    Inputs below 2**64 get a deterministic answer. Larger inputs get a base-2
    strong test followed by ``rounds`` further bases drawn from a generator
    seeded by ``n`` itself, so repeated calls agree. A divisor is attached to
    Composite verdicts whenever one falls out of trial division or a
    nontrivial square root of unity.
    """
    if n < 2:
        return PrimalityVerdict(PrimalityStatus.COMPOSITE)
    f = _small_factor(n)
    if f is not None and f != n:
        return PrimalityVerdict(PrimalityStatus.COMPOSITE, f)
    if n <= _TRIAL_LIMIT * _TRIAL_LIMIT:
        return PrimalityVerdict(PrimalityStatus.PRIME)

    d, s = _decompose(n)
    if n < DETERMINISTIC_LIMIT:
        for a in _BASES_64:
            ok, factor = _strong_test(n, a, d, s)
            if not ok:
                return PrimalityVerdict(PrimalityStatus.COMPOSITE, factor)
        return PrimalityVerdict(PrimalityStatus.PRIME)

    ok, factor = _strong_test(n, 2, d, s)
    if not ok:
        return PrimalityVerdict(PrimalityStatus.COMPOSITE, factor)
    rng = random.Random(n)
    for _ in range(rounds):
        ok, factor = _strong_test(n, rng.randrange(3, n - 1), d, s)
        if not ok:
            return PrimalityVerdict(PrimalityStatus.COMPOSITE, factor)
    return PrimalityVerdict(PrimalityStatus.PROBABLE_PRIME)


@dataclass(frozen=True)
class PrimeRange:
    """Primality flags for every integer in ``[lo, hi]``, one byte per integer."""

    lo: int
    hi: int
    flags: bytes

    def __post_init__(self):
        if self.lo > self.hi or len(self.flags) != self.hi - self.lo + 1:
            raise ValueError("flags must cover [lo, hi] exactly")

    def __contains__(self, m: int) -> bool:
        return self.lo <= m <= self.hi and bool(self.flags[m - self.lo])

    def primes(self) -> list[int]:
        return [self.lo + i for i, v in enumerate(self.flags) if v]


def sieve_range(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> PrimeRange:
    """Segmented sieve of Eratosthenes over ``[lo, hi]``.

    Ranges wider than ``segment_size`` raise :class:`SegmentTooLarge`; use
    :func:`iter_segments` to walk longer stretches.
    """
    if lo < 0 or lo > hi:
        raise ValueError(f"invalid range [{lo}, {hi}]")
    width = hi - lo + 1
    if width > segment_size:
        raise SegmentTooLarge(f"range of {width} integers exceeds segment size {segment_size}")
    flags = bytearray(b"\x01") * width
    for m in range(lo, min(hi, 1) + 1):
        flags[m - lo] = 0
    for p in primes_up_to(math.isqrt(hi)):
        start = max(p * p, (lo + p - 1) // p * p)
        if start > hi:
            continue
        flags[start - lo :: p] = bytes(len(range(start, hi + 1, p)))
    return PrimeRange(lo, hi, bytes(flags))


def iter_segments(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> Iterator[PrimeRange]:
    """Yield consecutive :class:`PrimeRange` segments tiling ``[lo, hi]``."""
    start = lo
    while start <= hi:
        stop = min(hi, start + segment_size - 1)
        yield sieve_range(start, stop, segment_size)
        start = stop + 1

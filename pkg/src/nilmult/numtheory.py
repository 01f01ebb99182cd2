"""Exact integer helpers: Moebius function, zero-aware gcd, Witt counts.

Throughout the package an order of ``0`` stands for the infinite cyclic
group, so ``gcd(0, x) == x`` makes "no torsion constraint" the neutral value.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable

from .errors import DomainError


def _factor_small(e: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    p = 2
    while p * p <= e:
        while e % p == 0:
            factors[p] = factors.get(p, 0) + 1
            e //= p
        p += 1 if p == 2 else 2
    if e > 1:
        factors[e] = factors.get(e, 0) + 1
    return factors


def mobius(e: int) -> int:
    """Return mu(e): 0 on a squared prime factor, else (-1)**(#primes)."""
    if e < 1:
        raise DomainError(f"mobius is defined for e >= 1, got {e}")
    factors = _factor_small(e)
    if any(k > 1 for k in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def divisors(d: int) -> list[int]:
    small = [e for e in range(1, math.isqrt(d) + 1) if d % e == 0]
    return sorted(set(small) | {d // e for e in small})


@lru_cache(maxsize=None)
def witt_chi(d: int, q: int) -> int:
    """Number of basic commutators of weight ``d`` on ``q`` generators."""
    if d < 1:
        raise DomainError(f"weight must be >= 1, got {d}")
    if q < 0:
        raise DomainError(f"generator count must be >= 0, got {q}")
    total = sum(mobius(e) * q ** (d // e) for e in divisors(d))
    count, rem = divmod(total, d)
    assert rem == 0, f"Moebius sum {total} not divisible by {d}"
    return count


def chi_partial_sum(base: int, span: int, q: int) -> int:
    """Sum of ``witt_chi(base + i, q)`` for ``i = 1 .. span``."""
    if base < 1 or span < 1:
        raise DomainError(f"need base >= 1 and span >= 1, got {base}, {span}")
    return sum(witt_chi(base + i, q) for i in range(1, span + 1))


def gcd_zero_aware(values: Iterable[int]) -> int:
    """gcd where 0 means "infinite": gcd(0, x) = x and gcd(0, 0) = 0."""
    values = list(values)
    if not values:
        raise DomainError("gcd of an empty list is undefined")
    if any(v < 0 for v in values):
        raise DomainError(f"orders must be non-negative, got {values}")
    return math.gcd(*values)

"""Randomized agreement checks between the three multiplier routes."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from sympy import primerange

from .multiplier import (
    ProductSpec,
    multiplier_closed_form,
    multiplier_general,
    multiplier_two_factor,
)


def random_chain_case(rng: random.Random, max_nc: int = 4, max_m: int = 2, max_t: int = 3):
    """``(n, c, m, chain)`` with chain primes all above ``n + c``."""
    n, c = rng.randint(1, max_nc), rng.randint(1, max_nc)
    m = rng.randint(0, max_m)
    t = rng.randint(0 if m else 1, max_t)
    primes = list(primerange(n + c + 1, 30))
    chain = []
    r = rng.choice(primes)
    for _ in range(t):
        chain.append(r)
        r *= rng.choice([1] + primes[:2])
    return n, c, m, tuple(reversed(chain))


def random_two_factor_case(rng: random.Random, max_nc: int = 4):
    """``(r, s, n, c)`` sharing a random common factor above ``n + c``."""
    n, c = rng.randint(1, max_nc), rng.randint(1, max_nc)
    primes = list(primerange(n + c + 1, 40))
    d = rng.choice([1] + primes)
    r = d * rng.choice([1] + primes)
    s = d * rng.choice([1] + primes)
    return r, s, n, c


@dataclass
class CrosscheckReport:
    trials: int
    seed: int
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"trials": self.trials, "seed": self.seed, "ok": self.ok, "mismatches": self.mismatches}


def run_crosscheck(trials: int = 200, seed: int = 0) -> CrosscheckReport:
    """Compare general vs closed form on chain specs and vs the two-factor form."""
    rng = random.Random(seed)
    report = CrosscheckReport(trials, seed)
    for _ in range(trials):
        n, c, m, chain = random_chain_case(rng)
        general = multiplier_general(ProductSpec(n, (0,) * m + chain), c)
        closed = multiplier_closed_form(m, chain, n, c)
        if general != closed:
            report.mismatches.append(
                {"route": "closed", "n": n, "c": c, "orders": [0] * m + list(chain),
                 "general": str(general), "other": str(closed)}
            )
    for _ in range(max(1, trials // 2)):
        r, s, n, c = random_two_factor_case(rng)
        general = multiplier_general(ProductSpec(n, (r, s)), c)
        two = multiplier_two_factor(r, s, n, c)
        if general != two:
            report.mismatches.append(
                {"route": "two-factor", "n": n, "c": c, "orders": [r, s],
                 "general": str(general), "other": str(two)}
            )
    return report

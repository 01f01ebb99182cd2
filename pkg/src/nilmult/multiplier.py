"""c-nilpotent multipliers of nilpotent products of cyclic groups.

Three routes to the same abelian group:

* :func:`multiplier_general` sums one cyclic factor per basic commutator in
  the relevant weight window, of order the gcd of the orders of the
  generators it involves. Works for any list of orders.
* :func:`multiplier_closed_form` needs ``m`` infinite factors followed by a
  divisibility chain ``r_1, ..., r_t`` and reads the answer off Witt counts.
* :func:`multiplier_two_factor` covers ``Z_r * Z_s`` with arbitrary gcd.

All three return an :class:`AbelianStructure`; compare them with ``==``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from sympy import factorint, primerange

from .errors import DomainError, PreconditionError
from .hallbasis import DEFAULT_BASIS_CAP, BasicCommutator, enumerate_basis
from .numtheory import chi_partial_sum, gcd_zero_aware


@dataclass(frozen=True)
class ProductSpec:
    """The ``class_n``-th nilpotent product of cyclic groups of the given orders.

    An order of 0 is an infinite cyclic factor.
    """

    class_n: int
    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(a) for a in self.orders))
        if self.class_n < 1:
            raise DomainError(f"nilpotency class must be >= 1, got {self.class_n}")
        if not self.orders:
            raise DomainError("need at least one cyclic factor")
        if any(a < 0 for a in self.orders):
            raise DomainError(f"orders must be non-negative, got {self.orders}")

    @property
    def q(self) -> int:
        return len(self.orders)

    @property
    def is_finite(self) -> bool:
        return all(a > 0 for a in self.orders)


@dataclass(frozen=True)
class Violation:
    prime: int
    order: int

    def __str__(self):
        return f"prime {self.prime} divides order {self.order}"


@dataclass(frozen=True)
class Verdict:
    bound: int
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "bound": self.bound,
            "violations": [{"prime": v.prime, "order": v.order} for v in self.violations],
        }

    def describe(self) -> str:
        if self.ok:
            return f"ok: no prime <= {self.bound} divides a finite order"
        listed = "; ".join(f"p={v.prime} <= {self.bound} divides {v.order}" for v in self.violations)
        return f"prime condition violated ({listed})"


def check_primes(orders: Iterable[int], bound: int) -> Verdict:
    """Every prime dividing a nonzero order must exceed ``bound``."""
    violations = []
    for a in orders:
        if a == 0:
            continue
        for p in primerange(2, bound + 1):
            if a % p == 0:
                violations.append(Violation(p, a))
    return Verdict(bound, tuple(violations))


def validate_spec(spec: ProductSpec, c: int) -> Verdict:
    """Check the prime hypothesis at level ``c``: primes dividing orders exceed n + c."""
    if c < 1:
        raise DomainError(f"c must be >= 1, got {c}")
    return check_primes(spec.orders, spec.class_n + c)


def modulus_of(u: BasicCommutator, orders: Sequence[int]) -> int:
    """gcd of the orders of the generators occurring in ``u`` (0 = infinite)."""
    bad = [k for k in u.occurrence if k > len(orders)]
    if bad:
        raise DomainError(f"{u} uses generators {sorted(bad)} but only {len(orders)} orders given")
    return gcd_zero_aware(orders[k - 1] for k in u.occurrence)


def weight_window(n: int, c: int) -> tuple[int, int]:
    """Weights of the basic commutators spanning the multiplier."""
    return (n + 1, n + c) if n >= c else (c + 1, n + c)


@dataclass(frozen=True)
class AbelianStructure:
    """Finitely generated abelian group ``Z^free_rank + torsion``.

    ``torsion`` is the sorted multiset of prime-power orders (primary
    decomposition) and is what equality compares. ``display`` keeps the
    (modulus, multiplicity) shape the structure was built from.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    display: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        total = 1
        for t in self.torsion:
            total *= t
        return total

    def factors(self) -> list[tuple[int, int]]:
        """Finite (modulus, multiplicity) pairs, modulus descending."""
        counts: Counter[int] = Counter()
        if self.display:
            for modulus, mult in self.display:
                if modulus:
                    counts[modulus] += mult
        else:
            counts.update(self.torsion)
        return sorted(counts.items(), reverse=True)

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "factors": [{"modulus": m, "multiplicity": e} for m, e in self.factors()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AbelianStructure":
        raw = [(0, obj["free_rank"])]
        raw += [(f["modulus"], f["multiplicity"]) for f in obj["factors"]]
        return canonicalize(raw)

    def __str__(self):
        terms = []
        if self.free_rank:
            terms.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for modulus, mult in self.factors():
            terms.append(f"Z_{modulus}" if mult == 1 else f"Z_{modulus}^{mult}")
        return " + ".join(terms) if terms else "0"

    def order_statistics(self) -> dict[int, int]:
        """Map element order -> number of elements of that order.

        Two finite abelian groups are isomorphic iff these maps agree.
        """
        if self.free_rank:
            raise DomainError("order statistics need a finite group")
        by_prime: dict[int, list[int]] = {}
        for t in self.torsion:
            (p, a), = factorint(t).items()
            by_prime.setdefault(p, []).append(a)
        stats = {1: 1}
        for p, exps in by_prime.items():
            # elements of the p-part with order dividing p^k
            dividing = [1]
            for k in range(1, max(exps) + 1):
                size = 1
                for a in exps:
                    size *= p ** min(a, k)
                dividing.append(size)
            local = {p**k: dividing[k] - dividing[k - 1] for k in range(1, len(dividing))}
            local[1] = 1
            merged: Counter[int] = Counter()
            for o1, n1 in stats.items():
                for o2, n2 in local.items():
                    merged[o1 * o2] += n1 * n2
            stats = dict(merged)
        return dict(sorted(stats.items()))


def canonicalize(raw: Iterable[tuple[int, int]]) -> AbelianStructure:
    """Turn ``(modulus, multiplicity)`` pairs into an :class:`AbelianStructure`.

    Modulus 0 counts towards the free rank, modulus 1 vanishes, anything else
    is split into prime powers.
    """
    free_rank = 0
    torsion: list[int] = []
    display = []
    for modulus, mult in raw:
        if modulus < 0 or mult < 0:
            raise DomainError(f"bad factor ({modulus}, {mult})")
        if mult == 0 or modulus == 1:
            continue
        display.append((modulus, mult))
        if modulus == 0:
            free_rank += mult
            continue
        for p, a in factorint(modulus).items():
            torsion.extend([p**a] * mult)
    return AbelianStructure(free_rank, tuple(sorted(torsion)), tuple(display))


def _require(verdict: Verdict, force: bool) -> None:
    if not verdict.ok and not force:
        raise PreconditionError(verdict.describe(), verdict.violations)


def multiplier_general(
    spec: ProductSpec, c: int, *, force: bool = False, cap: int = DEFAULT_BASIS_CAP
) -> AbelianStructure:
    """Multiplier as a direct sum over basic commutators of the weight window.

    With ``force=True`` the prime hypothesis is not enforced and the answer
    is outside what the underlying theorems guarantee.
    """
    _require(validate_spec(spec, c), force)
    lo, hi = weight_window(spec.class_n, c)
    table = enumerate_basis(spec.q, hi, cap)
    counts: Counter[int] = Counter()
    for i in range(table.weight_starts[lo], len(table)):
        counts[modulus_of(table[i], spec.orders)] += 1
    # free part first, then moduli descending, like the closed form reads
    raw = sorted(counts.items(), key=lambda kv: (kv[0] != 0, -kv[0]))
    return canonicalize(raw)


def is_divisibility_chain(rs: Sequence[int]) -> bool:
    return all(r > 0 for r in rs) and all(rs[j] % rs[j + 1] == 0 for j in range(len(rs) - 1))


def split_orders(orders: Sequence[int]) -> Optional[tuple[int, tuple[int, ...]]]:
    """``(m, chain)`` when orders are zeros followed by a divisibility chain."""
    m = 0
    while m < len(orders) and orders[m] == 0:
        m += 1
    rs = tuple(orders[m:])
    return (m, rs) if is_divisibility_chain(rs) else None


def closed_form_exponents(m: int, t: int, n: int, c: int) -> list[int]:
    """The partial Witt sums h_0..h_t (g-branch when n >= c, else f-branch)."""
    if n >= c:
        return [chi_partial_sum(n, c, m + k) for k in range(t + 1)]
    return [chi_partial_sum(c, n, m + k) for k in range(t + 1)]


def multiplier_closed_form(
    m: int, rs: Sequence[int], n: int, c: int, *, force: bool = False
) -> AbelianStructure:
    """``Z^(h_0) + Z_{r_1}^(h_1 - h_0) + ... + Z_{r_t}^(h_t - h_{t-1})``."""
    rs = tuple(rs)
    if m < 0 or n < 1 or c < 1:
        raise DomainError(f"need m >= 0, n >= 1, c >= 1, got {m}, {n}, {c}")
    if m + len(rs) < 1:
        raise DomainError("need at least one cyclic factor")
    if not is_divisibility_chain(rs):
        raise PreconditionError(f"orders {rs} are not a divisibility chain r_(j+1) | r_j")
    _require(check_primes(rs, n + c), force)
    h = closed_form_exponents(m, len(rs), n, c)
    assert all(a <= b for a, b in zip(h, h[1:])), f"partial sums not monotone: {h}"
    raw = [(0, h[0])] + [(r, h[j + 1] - h[j]) for j, r in enumerate(rs)]
    return canonicalize(raw)


def multiplier_two_factor(r: int, s: int, n: int, c: int, *, force: bool = False) -> AbelianStructure:
    """Multiplier of ``Z_r *_n Z_s``: ``Z_d`` to a Witt-sum power, ``d = gcd(r, s)``."""
    if r < 1 or s < 1 or n < 1 or c < 1:
        raise DomainError(f"need positive r, s, n, c, got {r}, {s}, {n}, {c}")
    _require(check_primes((r, s), n + c), force)
    d = gcd_zero_aware([r, s])
    exponent = chi_partial_sum(n, c, 2) if n >= c else chi_partial_sum(c, n, 2)
    return canonicalize([(d, exponent)])

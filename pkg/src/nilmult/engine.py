"""Exact arithmetic in nilpotent products of cyclic groups.

Elements are exponent vectors over the Hall basis of weight <= class, each
entry reduced modulo the gcd of the orders of the generators the basis
element involves (0 = not reduced). Products are formed by collection from
the left against a table of conjugates ``u_i^-1 u_k u_i`` and
``u_i u_k u_i^-1``; the table is expanded once per context through a
faithful truncated Magnus embedding, so it is exact in the free nilpotent
group and reduction is applied on top.

This module is the brute-force oracle for :mod:`nilmult.multiplier`.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ._magnus import MagnusExpander
from .errors import DomainError, PreconditionError, SizeError, UnsupportedError
from .hallbasis import DEFAULT_BASIS_CAP, enumerate_basis
from .multiplier import (
    AbelianStructure,
    ProductSpec,
    Verdict,
    check_primes,
    modulus_of,
    multiplier_general,
    validate_spec,
    weight_window,
)

DEFAULT_SUBGROUP_CAP = 10**6

Word = list  # of (basis index, exponent) pairs


class GroupContext:
    """Basis, moduli and conjugate tables for one :class:`ProductSpec`."""

    def __init__(self, spec: ProductSpec, *, force: bool = False, basis_cap: int = DEFAULT_BASIS_CAP):
        if spec.class_n < 2:
            raise DomainError(f"the engine needs nilpotency class >= 2, got {spec.class_n}")
        self.spec = spec
        self.verdict: Verdict = check_primes(spec.orders, spec.class_n)
        if not self.verdict.ok and not force:
            raise PreconditionError(self.verdict.describe(), self.verdict.violations)
        self.outside_hypotheses = not self.verdict.ok
        self.class_n = spec.class_n
        self.basis = enumerate_basis(spec.q, spec.class_n, basis_cap)
        self.moduli = tuple(modulus_of(u, spec.orders) for u in self.basis)
        self.weights = self.basis.weights
        self.size = len(self.basis)
        # partners[i]: indices k > i whose commutator with u_i can be nontrivial
        starts = self.basis.weight_starts
        self.partners = tuple(
            range(i + 1, starts[self.class_n - w + 1]) for i, w in enumerate(self.weights)
        )
        self._conj: dict[tuple[int, int, int], tuple[tuple[int, int], ...]] = {}
        self._build_conjugates()

    def _build_conjugates(self) -> None:
        basis = self.basis
        magnus = None
        for i in range(self.size):
            for k in self.partners[i]:
                if magnus is None:
                    magnus = MagnusExpander(basis, self.class_n)
                u = basis[k]
                if basis.is_hall_pair(u, basis[i]):
                    j = basis.index(type(u).pair(u, basis[i]))
                    self._conj[k, i, 1] = ((k, 1), (j, 1))
                else:
                    self._conj[k, i, 1] = self._expand(magnus, k, i, 1)
                # u_i u_k u_i^-1 = u_k [u_k, u_i^-1]
                self._conj[k, i, -1] = self._expand(magnus, k, i, -1)

    def _expand(self, m: MagnusExpander, k: int, i: int, sign: int):
        a, a_inv = m.series[i], m.inverse[i]
        if sign < 0:
            a, a_inv = a_inv, a
        comm = m.commutator(m.series[k], m.inverse[k], a, a_inv)
        expo = m.coordinates(comm, self.weights[i] + self.weights[k])
        return ((k, 1),) + tuple(sorted(expo.items()))

    def conjugate(self, k: int, i: int, sign: int) -> tuple[tuple[int, int], ...]:
        """Normal form of ``u_i^-sign u_k u_i^sign`` for ``k > i``."""
        if k in self.partners[i]:
            return self._conj[k, i, sign]
        return ((k, 1),)

    @property
    def is_finite(self) -> bool:
        return all(self.moduli)

    @property
    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        total = 1
        for n in self.moduli:
            total *= n
        return total

    # -- collection ---------------------------------------------------------

    def _reduce(self, exps: list[int], i: int) -> None:
        n = self.moduli[i]
        if n:
            exps[i] %= n

    def collect_into(self, exps: list[int], word: Iterable[tuple[int, int]], reduce: bool = True) -> list[int]:
        """Multiply the collected element ``exps`` on the right by ``word``, in place."""
        stack = [(i, e) for i, e in word if e][::-1]
        while stack:
            i, a = stack.pop()
            if not any(exps[k] for k in self.partners[i]):
                exps[i] += a
                if reduce:
                    self._reduce(exps, i)
                continue
            s = 1 if a > 0 else -1
            if a != s:
                stack.append((i, a - s))
            tail = [(k, exps[k]) for k in range(i + 1, self.size) if exps[k]]
            for k, _ in tail:
                exps[k] = 0
            exps[i] += s
            if reduce:
                self._reduce(exps, i)
            pending: list[tuple[int, int]] = []
            for k, e in tail:
                conj = self.conjugate(k, i, s)
                if len(conj) == 1:
                    pending.append((k, e))
                elif e > 0:
                    pending.extend(conj * e)
                else:
                    inv = tuple((j, -x) for j, x in reversed(conj))
                    pending.extend(inv * (-e))
            stack.extend(reversed(pending))
        return exps

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.size)

    def element(self, exponents: Sequence[int]) -> "GroupElement":
        if len(exponents) != self.size:
            raise DomainError(f"expected {self.size} exponents, got {len(exponents)}")
        exps = list(exponents)
        for i in range(self.size):
            self._reduce(exps, i)
        return GroupElement(self, tuple(exps))

    def basis_element(self, i: int) -> "GroupElement":
        exps = [0] * self.size
        exps[i] = 1
        return self.element(exps)

    def generators(self) -> list["GroupElement"]:
        return [self.basis_element(i) for i in self.basis.weight_range(1)]

    def collect(self, word: Sequence[tuple[int, int]], reduce: bool = True) -> "GroupElement":
        """Normal form of a :data:`GeneratorWord` ``[(generator, exponent), ...]``."""
        letters = []
        for g, e in word:
            if not 1 <= g <= self.spec.q:
                raise DomainError(f"generator g{g} out of range 1..{self.spec.q}")
            letters.append((g - 1, e))
        exps = self.collect_into([0] * self.size, letters, reduce)
        if not reduce:
            for i in range(self.size):
                self._reduce(exps, i)
        return GroupElement(self, tuple(exps))

    def multiply(self, g: "GroupElement", h: "GroupElement") -> "GroupElement":
        exps = self.collect_into(list(g.exponents), enumerate(h.exponents))
        return GroupElement(self, tuple(exps))

    def inverse(self, g: "GroupElement") -> "GroupElement":
        word = [(i, -e) for i, e in reversed(list(enumerate(g.exponents))) if e]
        return GroupElement(self, tuple(self.collect_into([0] * self.size, word)))

    def commutator(self, g: "GroupElement", h: "GroupElement") -> "GroupElement":
        """``[g, h] = g^-1 h^-1 g h``."""
        return self.multiply(self.multiply(self.inverse(g), self.inverse(h)), self.multiply(g, h))

    def power(self, g: "GroupElement", e: int) -> "GroupElement":
        base = g if e >= 0 else self.inverse(g)
        out = self.identity()
        for _ in range(abs(e)):
            out = self.multiply(out, base)
        return out

    def render(self, g: "GroupElement", prefix: str = "g") -> str:
        parts = []
        for u, e in zip(self.basis, g.exponents):
            if e:
                text = u.render(prefix)
                parts.append(text if e == 1 else f"{text}^{e}")
        return " ".join(parts) if parts else "1"


@dataclass(frozen=True)
class GroupElement:
    """Struik normal form: exponent vector aligned with ``ctx.basis``."""

    ctx: GroupContext = field(compare=False, repr=False)
    exponents: tuple[int, ...]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.ctx.multiply(self, other)

    def __invert__(self) -> "GroupElement":
        return self.ctx.inverse(self)

    def __pow__(self, e: int) -> "GroupElement":
        return self.ctx.power(self, e)

    @property
    def is_identity(self) -> bool:
        return not any(self.exponents)

    def __str__(self):
        return self.ctx.render(self)


def build_group(spec: ProductSpec, *, force: bool = False, basis_cap: int = DEFAULT_BASIS_CAP) -> GroupContext:
    return GroupContext(spec, force=force, basis_cap=basis_cap)


_TOKEN = re.compile(r"g(\d+)(?:\^(-?\d+))?")


def parse_word(text: str) -> list[tuple[int, int]]:
    """Parse ``"g1 g2^-1 g1^3"`` into ``[(1, 1), (2, -1), (1, 3)]``."""
    word = []
    for token in text.split():
        match = _TOKEN.fullmatch(token)
        if not match:
            raise DomainError(f"bad word token {token!r}; expected gK or gK^E")
        word.append((int(match[1]), int(match[2]) if match[2] else 1))
    return word


def closure(ctx: GroupContext, generators: Sequence[GroupElement], start: Iterable[GroupElement] = (), cap: int = DEFAULT_SUBGROUP_CAP) -> set[GroupElement]:
    """Breadth-first closure of ``start`` (default: identity) under right multiplication."""
    seen = set(start) or {ctx.identity()}
    queue = deque(seen)
    while queue:
        g = queue.popleft()
        for s in generators:
            h = ctx.multiply(g, s)
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise SizeError(f"subgroup exceeds the cap of {cap} elements")
                queue.append(h)
    return seen


def gamma_subgroup(ctx: GroupContext, k: int, cap: int = DEFAULT_SUBGROUP_CAP) -> frozenset[GroupElement]:
    """All elements of the subgroup generated by basis elements of weight >= k."""
    if k < 2:
        raise DomainError(f"lower central index must be >= 2, got {k}")
    if not ctx.is_finite:
        raise UnsupportedError("gamma subgroups are only enumerated for finite groups")
    gens_idx = [i for i in range(ctx.size) if ctx.weights[i] >= k]
    estimate = 1
    for i in gens_idx:
        estimate *= ctx.moduli[i]
    if estimate > cap:
        raise SizeError(f"gamma_{k} has about {estimate} elements, above the cap of {cap}")
    gens = [ctx.basis_element(i) for i in gens_idx]
    elements = closure(ctx, gens, cap=cap)
    for g in elements:
        assert ctx.inverse(g) in elements, "subgroup not closed under inverses"
    return frozenset(elements)


@dataclass
class Fingerprint:
    abelian: bool
    order_statistics: dict[int, int]

    @property
    def order(self) -> int:
        return sum(self.order_statistics.values())


def element_order(ctx: GroupContext, g: GroupElement, limit: int = DEFAULT_SUBGROUP_CAP) -> int:
    h, n = g, 1
    while not h.is_identity:
        h = ctx.multiply(h, g)
        n += 1
        if n > limit:
            raise SizeError(f"element order exceeds {limit}")
    return n


def abelian_fingerprint(elements: Iterable[GroupElement], ctx: GroupContext) -> Fingerprint:
    """Order statistics of a finite subgroup, plus whether it is abelian.

    Closure is checked by greedily picking generators and confirming their
    closure is exactly the given set; commutativity is checked on those
    generators, which decides it for the whole subgroup.
    """
    elements = set(elements)
    if ctx.identity() not in elements:
        raise DomainError("set is not closed: identity missing")
    gens: list[GroupElement] = []
    span = {ctx.identity()}
    for x in sorted(elements, key=lambda g: g.exponents):
        if x in span:
            continue
        gens.append(x)
        try:
            span = closure(ctx, gens, start=span, cap=len(elements))
        except SizeError:
            span = None
        if span is None or not span <= elements:
            raise DomainError("set is not closed under multiplication")
    abelian = all(
        ctx.multiply(a, b) == ctx.multiply(b, a)
        for i, a in enumerate(gens) for b in gens[i + 1:]
    )
    stats = Counter(element_order(ctx, g) for g in elements)
    return Fingerprint(abelian, dict(sorted(stats.items())))


@dataclass
class VerifyReport:
    spec: ProductSpec
    c: int
    ambient_class: int
    gamma_index: int
    predicted: AbelianStructure
    predicted_statistics: dict[int, int]
    observed: Fingerprint
    warnings: list[str] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return self.observed.abelian and self.observed.order_statistics == self.predicted_statistics

    def to_json(self) -> dict:
        return {
            "match": self.match,
            "class": self.spec.class_n,
            "c": self.c,
            "orders": list(self.spec.orders),
            "ambient_class": self.ambient_class,
            "gamma_index": self.gamma_index,
            "predicted": self.predicted.to_json(),
            "predicted_text": str(self.predicted),
            "abelian": self.observed.abelian,
            "subgroup_order": self.observed.order,
            "predicted_statistics": {str(k): v for k, v in self.predicted_statistics.items()},
            "observed_statistics": {str(k): v for k, v in self.observed.order_statistics.items()},
        }


def verify_multiplier(
    spec: ProductSpec,
    c: int,
    *,
    force: bool = False,
    basis_cap: int = DEFAULT_BASIS_CAP,
    subgroup_cap: int = DEFAULT_SUBGROUP_CAP,
) -> VerifyReport:
    """Enumerate the gamma subgroup of the (n+c)-class product and compare."""
    if not spec.is_finite:
        raise UnsupportedError("infinite factor in oracle: verification needs finite orders")
    verdict = validate_spec(spec, c)
    warnings = []
    if not verdict.ok:
        if not force:
            raise PreconditionError(verdict.describe(), verdict.violations)
        warnings.append(f"outside theorem hypotheses: {verdict.describe()}")
    predicted = multiplier_general(spec, c, force=force, cap=basis_cap)
    n = spec.class_n
    lo, _ = weight_window(n, c)
    ambient = build_group(ProductSpec(n + c, spec.orders), force=force, basis_cap=basis_cap)
    subgroup = gamma_subgroup(ambient, lo, subgroup_cap)
    observed = abelian_fingerprint(subgroup, ambient)
    return VerifyReport(spec, c, n + c, lo, predicted, predicted.order_statistics(), observed, warnings)

"""Hall basic commutators: construction, fixed total order, text format.

The order used everywhere: weight ascending; weight-1 entries by generator
index; heavier entries lexicographically by (index of left, index of right).
Weight-2 commutators therefore read ``[x_j, x_i]`` with ``j > i``.
"""

from __future__ import annotations

from bisect import bisect_left
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DomainError, SizeError
from .numtheory import witt_chi

DEFAULT_BASIS_CAP = 10**6


class BasicCommutator:
    """A leaf ``x_k`` or a bracket ``[left, right]``; immutable."""

    __slots__ = ("generator", "left", "right", "weight", "occurrence", "_key", "_hash")

    def __init__(self, generator=None, left=None, right=None):
        if generator is not None:
            if left is not None or right is not None or generator < 1:
                raise DomainError("a leaf takes a single generator index >= 1")
            weight, occurrence, key = 1, frozenset((generator,)), generator
        else:
            if left is None or right is None:
                raise DomainError("a bracket needs both a left and a right part")
            weight = left.weight + right.weight
            occurrence = left.occurrence | right.occurrence
            key = (left._key, right._key)
        object.__setattr__(self, "generator", generator)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "occurrence", occurrence)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("BasicCommutator is immutable")

    @classmethod
    def leaf(cls, generator: int) -> "BasicCommutator":
        return cls(generator=generator)

    @classmethod
    def pair(cls, left: "BasicCommutator", right: "BasicCommutator") -> "BasicCommutator":
        return cls(left=left, right=right)

    @property
    def is_leaf(self) -> bool:
        return self.generator is not None

    def __eq__(self, other):
        if not isinstance(other, BasicCommutator):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return self._hash

    def render(self, prefix: str = "x") -> str:
        if self.is_leaf:
            return f"{prefix}{self.generator}"
        return f"[{self.left.render(prefix)},{self.right.render(prefix)}]"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"BasicCommutator({self.render()!r})"


def occurring_generators(u: BasicCommutator) -> frozenset[int]:
    """The set of generator indices appearing as leaves of ``u``."""
    return u.occurrence


def parse_commutator(text: str, prefix: str = "x") -> BasicCommutator:
    """Inverse of :meth:`BasicCommutator.render`.

    >>> parse_commutator("[[x2,x1],x1]").weight
    3
    """
    pos = 0

    def parse() -> BasicCommutator:
        nonlocal pos
        if text.startswith("[", pos):
            pos += 1
            left = parse()
            if not text.startswith(",", pos):
                raise DomainError(f"expected ',' at position {pos} in {text!r}")
            pos += 1
            right = parse()
            if not text.startswith("]", pos):
                raise DomainError(f"expected ']' at position {pos} in {text!r}")
            pos += 1
            return BasicCommutator.pair(left, right)
        if not text.startswith(prefix, pos):
            raise DomainError(f"expected {prefix!r} at position {pos} in {text!r}")
        pos += len(prefix)
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise DomainError(f"missing generator index at position {start} in {text!r}")
        return BasicCommutator.leaf(int(text[start:pos]))

    result = parse()
    if pos != len(text):
        raise DomainError(f"trailing characters in {text!r}")
    return result


class BasisTable(Sequence[BasicCommutator]):
    """All basic commutators of weight <= ``max_weight`` on ``q`` generators."""

    def __init__(self, q: int, max_weight: int, commutators: Sequence[BasicCommutator]):
        self.q = q
        self.max_weight = max_weight
        self.commutators = tuple(commutators)
        self._index = {u: i for i, u in enumerate(self.commutators)}
        self.weights = tuple(u.weight for u in self.commutators)
        # weight_starts[w] is the index of the first entry of weight w
        self.weight_starts = tuple(
            bisect_left(self.weights, w) for w in range(0, max_weight + 2)
        )

    def __len__(self):
        return len(self.commutators)

    def __getitem__(self, i):
        return self.commutators[i]

    def __iter__(self) -> Iterator[BasicCommutator]:
        return iter(self.commutators)

    def __contains__(self, u):
        return u in self._index

    def index(self, u: BasicCommutator) -> int:
        try:
            return self._index[u]
        except KeyError:
            raise DomainError(f"{u} is not in this basis") from None

    def weight_range(self, w: int) -> range:
        if w < 1 or w > self.max_weight:
            return range(0)
        return range(self.weight_starts[w], self.weight_starts[w + 1])

    def of_weight(self, w: int) -> tuple[BasicCommutator, ...]:
        return tuple(self.commutators[i] for i in self.weight_range(w))

    def is_hall_pair(self, u: BasicCommutator, v: BasicCommutator) -> bool:
        """Hall's condition for ``[u, v]`` relative to this table's order."""
        if u not in self or v not in self:
            return False
        iu, iv = self._index[u], self._index[v]
        if iu <= iv:
            return False
        if not u.is_leaf and iv < self._index[u.right]:
            return False
        return True

    def __repr__(self):
        return f"BasisTable(q={self.q}, max_weight={self.max_weight}, size={len(self)})"


def basis_size(q: int, max_weight: int) -> int:
    return sum(witt_chi(d, q) for d in range(1, max_weight + 1))


@lru_cache(maxsize=32)
def _build(q: int, max_weight: int) -> tuple[BasicCommutator, ...]:
    if max_weight == 1:
        return tuple(BasicCommutator.leaf(k) for k in range(1, q + 1))
    prev = _build(q, max_weight - 1)
    index = {u: i for i, u in enumerate(prev)}
    by_weight: dict[int, list[BasicCommutator]] = {}
    for u in prev:
        by_weight.setdefault(u.weight, []).append(u)
    w = max_weight
    found = []
    for wu in range(w - 1, 0, -1):
        wv = w - wu
        if wv > wu:
            break
        for u in by_weight.get(wu, ()):
            iu = index[u]
            floor = index[u.right] if not u.is_leaf else -1
            for v in by_weight.get(wv, ()):
                iv = index[v]
                if iv < iu and iv >= floor:
                    found.append((iu, iv, BasicCommutator.pair(u, v)))
    found.sort(key=lambda t: (t[0], t[1]))
    return prev + tuple(t[2] for t in found)


def enumerate_basis(q: int, max_weight: int, cap: int = DEFAULT_BASIS_CAP) -> BasisTable:
    """Build the ordered Hall basis of weights ``1..max_weight`` on ``q`` letters.

    Raises :class:`SizeError` before doing any work when the Witt formula
    says the table would hold more than ``cap`` entries.
    """
    if q < 0 or max_weight < 1:
        raise DomainError(f"need q >= 0 and max_weight >= 1, got {q}, {max_weight}")
    size = basis_size(q, max_weight)
    if size > cap:
        raise SizeError(
            f"basis on {q} generators up to weight {max_weight} has {size} "
            f"commutators, above the cap of {cap}"
        )
    table = BasisTable(q, max_weight, _build(q, max_weight))
    assert len(table) == size
    return table


def count_involving_last(q: int, lo: int, hi: int, cap: int = DEFAULT_BASIS_CAP) -> int:
    """Count basic commutators with weight in ``[lo, hi]`` that contain ``x_q``."""
    if q < 1:
        raise DomainError(f"need q >= 1, got {q}")
    if lo < 1 or hi < lo:
        raise DomainError(f"need 1 <= lo <= hi, got {lo}, {hi}")
    table = enumerate_basis(q, hi, cap)
    return sum(
        1 for u in table if lo <= u.weight <= hi and q in u.occurrence
    )

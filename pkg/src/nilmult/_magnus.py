"""Truncated Magnus embedding of a free nilpotent group.

``x_k -> 1 + X_k`` in non-commuting power series over Z, cut off above
degree ``N``, is faithful on ``F / gamma_{N+1}(F)``. Used to expand a group
element exactly as an ordered product of Hall basis powers.
"""

from __future__ import annotations

from fractions import Fraction

from .hallbasis import BasisTable

Series = dict  # word (tuple of generator indices) -> integer coefficient


def multiply(a: Series, b: Series, degree: int) -> Series:
    out: Series = {}
    for wa, ca in a.items():
        room = degree - len(wa)
        for wb, cb in b.items():
            if len(wb) <= room:
                w = wa + wb
                out[w] = out.get(w, 0) + ca * cb
    return {w: c for w, c in out.items() if c}


class MagnusExpander:
    """Series images of basis elements plus an exact basis-coordinate solver."""

    def __init__(self, table: BasisTable, degree: int):
        self.table = table
        self.degree = degree
        self.series: list[Series] = []
        self.inverse: list[Series] = []
        for u in table:
            if u.is_leaf:
                k = u.generator
                self.series.append({(): 1, (k,): 1})
                self.inverse.append({(k,) * j: (-1) ** j for j in range(degree + 1)})
            else:
                i, j = table.index(u.left), table.index(u.right)
                self.series.append(self.commutator(self.series[i], self.inverse[i], self.series[j], self.inverse[j]))
                self.inverse.append(self.commutator(self.series[j], self.inverse[j], self.series[i], self.inverse[i]))
        self._solvers = {w: self._solver(w) for w in range(1, degree + 1)}

    def commutator(self, a, a_inv, b, b_inv) -> Series:
        """[a, b] = a^-1 b^-1 a b."""
        d = self.degree
        return multiply(multiply(a_inv, b_inv, d), multiply(a, b, d), d)

    def power(self, i: int, e: int) -> Series:
        base = self.series[i] if e > 0 else self.inverse[i]
        out: Series = {(): 1}
        for _ in range(abs(e)):
            out = multiply(out, base, self.degree)
        return out

    def _solver(self, w: int):
        cols = list(self.table.weight_range(w))
        if not cols:
            return cols, [], []
        words = sorted({x for i in cols for x in self.series[i] if len(x) == w})
        rows = [[Fraction(self.series[i].get(x, 0)) for i in cols] for x in words]
        # pick pivot rows by elimination, then invert that square block
        pivots, reduced = [], []
        for r, row in enumerate(rows):
            vec = list(row)
            for prow, pcol in reduced:
                if vec[pcol]:
                    f = vec[pcol] / prow[pcol]
                    vec = [v - f * p for v, p in zip(vec, prow)]
            nz = next((c for c, v in enumerate(vec) if v), None)
            if nz is not None:
                pivots.append(r)
                reduced.append((vec, nz))
            if len(pivots) == len(cols):
                break
        assert len(pivots) == len(cols), f"Lie images of weight {w} are dependent"
        inv = _invert([rows[r] for r in pivots])
        return cols, [words[r] for r in pivots], inv

    def coordinates(self, g: Series, start_weight: int = 1) -> dict[int, int]:
        """Exponents m_i with g = prod u_i^m_i; g must lie in gamma_start."""
        out: dict[int, int] = {}
        h = g
        for w in range(start_weight, self.degree + 1):
            cols, words, inv = self._solvers[w]
            lower = [x for x, c in h.items() if 0 < len(x) < w and c]
            assert not lower, f"element not in gamma_{w}: {lower[:3]}"
            if not cols:
                continue
            rhs = [h.get(x, 0) for x in words]
            ms = []
            for row in inv:
                m = sum(a * b for a, b in zip(row, rhs))
                assert m.denominator == 1, "non-integral basis coordinate"
                ms.append(int(m))
            layer: Series = {(): 1}
            for i, m in zip(cols, ms):
                if m:
                    out[i] = m
                    layer = multiply(layer, self.power(i, m), self.degree)
            check = {x: c for x, c in h.items() if len(x) == w}
            assert check == {x: c for x, c in layer.items() if len(x) == w}, "residual in weight layer"
            h = multiply(_invert_series(layer, self.degree), h, self.degree)
        assert h == {(): 1}, "element not fully expanded"
        return out


def _invert_series(s: Series, degree: int) -> Series:
    # s = 1 + t with t of positive degree: s^-1 = sum (-t)^j
    t = {w: -c for w, c in s.items() if w}
    out: Series = {(): 1}
    term: Series = {(): 1}
    for _ in range(degree):
        term = multiply(term, t, degree)
        if not term:
            break
        for w, c in term.items():
            out[w] = out.get(w, 0) + c
    return {w: c for w, c in out.items() if c}


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * pv for v, pv in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]

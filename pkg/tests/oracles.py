"""Brute-force references that share no code with the package."""

from itertools import product


def is_lyndon(word):
    return all(word < word[i:] + word[:i] for i in range(1, len(word)))


def lyndon_count(d, q):
    return sum(1 for w in product(range(q), repeat=d) if is_lyndon(w))


def _mul(a, b, deg):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            if len(wa) + len(wb) <= deg:
                out[wa + wb] = out.get(wa + wb, 0) + ca * cb
    return {w: c for w, c in out.items() if c}


class FreeNilpotentSeries:
    """x_k -> 1 + X_k in Z<<X>> truncated above ``deg``; faithful mod gamma_{deg+1}."""

    def __init__(self, deg):
        self.deg = deg

    def gen(self, k, e=1):
        base = {(): 1, (k,): 1} if e > 0 else {(k,) * j: (-1) ** j for j in range(self.deg + 1)}
        out = {(): 1}
        for _ in range(abs(e)):
            out = _mul(out, base, self.deg)
        return out

    def word(self, letters):
        out = {(): 1}
        for k, e in letters:
            out = _mul(out, self.gen(k, e), self.deg)
        return out

    def commutator_word(self, u):
        """Generator word for a basic commutator (render string tree), [a,b] = a^-1 b^-1 a b."""
        if u.is_leaf:
            return [(u.generator, 1)]
        a, b = self.commutator_word(u.left), self.commutator_word(u.right)
        inv = lambda w: [(k, -e) for k, e in reversed(w)]
        return inv(a) + inv(b) + a + b

    def basis_series(self, u):
        key = u.render()
        cache = self.__dict__.setdefault("_cache", {})
        if key not in cache:
            cache[key] = (self.word(self.commutator_word(u)), self.word(
                [(k, -e) for k, e in reversed(self.commutator_word(u))]))
        return cache[key]

    def normal_form(self, basis, exponents):
        out = {(): 1}
        for u, m in zip(basis, exponents):
            fwd, back = self.basis_series(u)
            for _ in range(abs(m)):
                out = _mul(out, fwd if m > 0 else back, self.deg)
        return out

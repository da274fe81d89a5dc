"""Free products of engines, with syllable normal forms."""
from __future__ import annotations

from typing import Sequence

from ..words import Word
from .base import MarkedGroup


class FreeProduct(MarkedGroup):
    """P = G_1 * ... * G_k.

    An element is its normal form: a tuple of ``(factor index, factor
    element)`` syllables, no syllable trivial and no two neighbours in the
    same factor.  Generators are the factors' generators, concatenated.
    """

    engine = "free-product"

    def __init__(self, factors: Sequence[MarkedGroup], generators: Sequence[str] | None = None):
        self.factors = list(factors)
        if not self.factors:
            raise ValueError("need at least one factor")
        self._owner: list[tuple[int, int]] = []
        for k, F in enumerate(self.factors):
            self._owner += [(k, i) for i in range(F.rank)]
        if generators is None:
            generators = [name for F in self.factors for name in F.generators]
        super().__init__(generators)
        if len(self.generators) != len(self._owner):
            raise ValueError("generator count does not match the factors")
        self.is_finite = False if len(self.factors) > 1 else self.factors[0].is_finite

    @property
    def identity(self) -> tuple:
        return ()

    def syllable(self, k: int, g) -> tuple:
        F = self.factors[k]
        return () if F.is_identity(g) else ((k, g),)

    def generator(self, i: int) -> tuple:
        k, j = self._owner[i]
        return self.syllable(k, self.factors[k].generator(j))

    def mul(self, g: tuple, h: tuple) -> tuple:
        if not g:
            return h
        if not h:
            return g
        left = list(g)
        j = 0
        while left and j < len(h):
            k, a = left[-1]
            k2, b = h[j]
            if k != k2:
                break
            F = self.factors[k]
            c = F.mul(a, b)
            left.pop()
            j += 1
            if not F.is_identity(c):
                left.append((k, c))
                break
        return tuple(left) + h[j:]

    def inv(self, g: tuple) -> tuple:
        return tuple((k, self.factors[k].inv(a)) for k, a in reversed(g))

    def word_of(self, g: tuple) -> Word:
        offsets = []
        total = 0
        for F in self.factors:
            offsets.append(total)
            total += F.rank
        out: list[int] = []
        for k, a in g:
            out += [c + 2 * offsets[k] for c in self.factors[k].word_of(a)]
        return tuple(out)

    def distance_lower_bound(self, g: tuple) -> int:
        return sum(max(1, self.factors[k].distance_lower_bound(a)) for k, a in g)

    def encode(self, g: tuple) -> bytes:
        return b"|".join(str(k).encode() + b":" + self.factors[k].encode(a) for k, a in g)

    def factor_of_generator(self, i: int) -> tuple[int, int]:
        return self._owner[i]


def free_product_normal_form(P: FreeProduct, w: Word) -> tuple:
    """Normal form (p_1, ..., p_m) of the image of ``w`` in P."""
    from .base import evaluate_word
    return evaluate_word(P, w)

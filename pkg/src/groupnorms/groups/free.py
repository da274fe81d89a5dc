"""Free groups: elements are freely reduced words."""
from __future__ import annotations

from typing import Sequence

from ..words import Word, inverse_word, reduce_word
from .base import MarkedGroup


class FreeGroup(MarkedGroup):
    engine = "free"

    def __init__(self, generators: Sequence[str] | int):
        if isinstance(generators, int):
            generators = [f"x{i}" for i in range(1, generators + 1)]
        super().__init__(generators)

    @property
    def identity(self) -> Word:
        return ()

    def generator(self, i: int) -> Word:
        return (2 * i,)

    def mul(self, g: Word, h: Word) -> Word:
        k = 0
        n = min(len(g), len(h))
        while k < n and g[-1 - k] == h[k] ^ 1:
            k += 1
        return g[: len(g) - k] + h[k:]

    def mul_letter(self, g: Word, code: int) -> Word:
        if g and g[-1] == code ^ 1:
            return g[:-1]
        return g + (code,)

    def inv(self, g: Word) -> Word:
        return inverse_word(g)

    def relators(self):
        return []

    def word_of(self, g: Word) -> Word:
        return g

    def distance_lower_bound(self, g: Word) -> int:
        return len(g)

    def canonical(self, w) -> Word:
        return reduce_word(w)

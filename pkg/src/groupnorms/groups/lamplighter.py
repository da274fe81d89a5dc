"""The lamplighter group Z_2 wr Z marked by t and the lamps a_{-n..n}.

An element (S, s) stands for (prod_{k in S} a_k) t^s with the convention
t^-1 a_k t = a_{k+1}, hence t^s a_k t^-s = a_{k-s} and
(S, s)(T, u) = (S xor (T - s), s + u).
"""
from __future__ import annotations

from ..words import Word, letter
from .base import MarkedGroup
from .hnn import hn_generator_names


class Lamplighter(MarkedGroup):
    engine = "lamplighter"

    def __init__(self, n: int = 0):
        if n < 0:
            raise ValueError("n must be >= 0")
        self.n = n
        super().__init__(hn_generator_names(n))

    @property
    def identity(self):
        return ((), 0)

    def generator(self, i: int):
        if i == 0:
            return ((), 1)
        return ((i - 1 - self.n,), 0)

    def mul(self, g, h):
        S, s = g
        T, u = h
        if not T:
            return (S, s + u)
        lamps = set(S)
        lamps.symmetric_difference_update(k - s for k in T)
        return (tuple(sorted(lamps)), s + u)

    def inv(self, g):
        S, s = g
        return (tuple(sorted(k + s for k in S)), -s)

    def word_of(self, g) -> Word:
        S, s = g
        out: list[int] = []
        for k in S:
            # a_k = t^{-(k)} a_0 t^{k} when |k| exceeds the marked lamps
            j = max(-self.n, min(self.n, k))
            shift = k - j
            tw = letter(0, -1) if shift > 0 else letter(0)
            out += [tw] * abs(shift) + [letter(1 + j + self.n)] + [tw ^ 1] * abs(shift)
        out += [letter(0, 1 if s > 0 else -1)] * abs(s)
        return tuple(out)

    def relators(self):
        return None

    def encode(self, g) -> bytes:
        if g == self.identity:
            return b""
        return (",".join(map(str, g[0])) + "/" + str(g[1])).encode()

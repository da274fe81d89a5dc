"""Finitely generated abelian groups Z^r x Z_{n_1} x ... given by coordinates."""
from __future__ import annotations

from typing import Sequence

from ..words import letter
from .base import MarkedGroup


class AbelianGroup(MarkedGroup):
    """Coordinates mod ``orders`` (0 means an infinite cyclic coordinate).

    ``images[i]`` is the coordinate vector of the i-th generator; by default
    the generators are the standard basis vectors.
    """

    engine = "abelian"

    def __init__(self, orders: Sequence[int], generators: Sequence[str] | None = None,
                 images: Sequence[Sequence[int]] | None = None):
        self.orders = tuple(int(n) for n in orders)
        if any(n < 0 for n in self.orders):
            raise ValueError("orders must be >= 0")
        if images is None:
            images = [tuple(int(i == j) for j in range(len(self.orders))) for i in range(len(self.orders))]
        if generators is None:
            generators = [f"x{i}" for i in range(1, len(images) + 1)]
        super().__init__(generators)
        if len(images) != len(self.generators):
            raise ValueError("one image per generator required")
        self.images = [self._norm(v) for v in images]
        self.is_finite = all(n > 0 for n in self.orders)
        units = all(sum(1 for x in v if x) == 1 and 1 in v for v in self.images)
        self._standard = units and len({v.index(1) for v in self.images}) == len(self.images) \
            and len(self.images) == len(self.orders)

    def _norm(self, v) -> tuple:
        if len(v) != len(self.orders):
            raise ValueError(f"vector {v} has wrong length")
        return tuple(x % n if n else x for x, n in zip(v, self.orders))

    @property
    def identity(self) -> tuple:
        return (0,) * len(self.orders)

    def generator(self, i: int) -> tuple:
        return self.images[i]

    def mul(self, g, h):
        return tuple((a + b) % n if n else a + b for a, b, n in zip(g, h, self.orders))

    def inv(self, g):
        return tuple((-a) % n if n else -a for a, n in zip(g, self.orders))

    def order(self):
        if not self.is_finite:
            return None
        out = 1
        for n in self.orders:
            out *= n
        return out

    def elements(self):
        if not self.is_finite:
            raise NotImplementedError("infinite abelian group")
        reachable = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for g in frontier:
                for c in range(2 * self.rank):
                    h = self.mul_letter(g, c)
                    if h not in reachable:
                        reachable.add(h)
                        nxt.append(h)
            frontier = nxt
        return sorted(reachable)

    def relators(self):
        if not self._standard:
            return None
        rels = []
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                a, b = letter(i), letter(j)
                rels.append((a, b, a ^ 1, b ^ 1))
        for i, v in enumerate(self.images):
            n = self.orders[v.index(1)]
            if n:
                rels.append((letter(i),) * n)
        return rels

    def word_of(self, g):
        if not self._standard:
            raise NotImplementedError("word_of needs the standard marking")
        w = []
        for i, v in enumerate(self.images):
            k = g[v.index(1)]
            w += [letter(i, 1 if k > 0 else -1)] * abs(k)
        return tuple(w)

    def distance_lower_bound(self, g) -> int:
        if not self._standard:
            return 0
        return sum(min(x, n - x) if n else abs(x) for x, n in zip(g, self.orders))

    def encode(self, g) -> bytes:
        if g == self.identity:
            return b""
        return ",".join(map(str, g)).encode("ascii")


def cyclic_group(n: int, name: str = "x") -> AbelianGroup:
    """Z_n marked by one generator (n = 0 gives Z)."""
    return AbelianGroup([n], [name])


def free_abelian(rank: int, names: Sequence[str] | None = None) -> AbelianGroup:
    return AbelianGroup([0] * rank, names)

"""Finite presentations and Todd-Coxeter coset enumeration (HLT strategy).

Enumeration is over the trivial subgroup, so a closed table is the right
regular action of the group on itself.  The table is standardized by a
breadth-first walk from the identity coset with letters in code order, which
makes element numbering (and therefore canonical forms) deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..errors import ResourceExceeded
from ..words import Word, inverse_word, is_reduced, power, reduce_word, reduced_words
from .base import MarkedGroup

DEFAULT_COSET_BOUND = 10**6


@dataclass(frozen=True)
class FinitePresentation:
    generators: tuple
    relators: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        rels = tuple(tuple(r) for r in self.relators)
        for r in rels:
            if not r:
                raise ValueError("relators must be nonempty")
            if not is_reduced(r):
                raise ValueError(f"relator {r} is not freely reduced")
            if any((c >> 1) >= len(self.generators) for c in r):
                raise ValueError(f"relator {r} uses an unknown generator")
        object.__setattr__(self, "relators", rels)

    @property
    def rank(self) -> int:
        return len(self.generators)


@dataclass
class CosetTable:
    """Closed, standardized coset table: ``table[c][letter]`` is a coset index."""

    table: list
    rank: int
    cosets_defined: int

    @property
    def order(self) -> int:
        return len(self.table)


def coset_enumerate(P: FinitePresentation, bound: int = DEFAULT_COSET_BOUND) -> CosetTable:
    """Enumerate cosets of the trivial subgroup.

    Raises ResourceExceeded if more than ``bound`` cosets get defined before
    the table closes (group possibly infinite, or bound too small).
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    m2 = 2 * P.rank
    rels = [r for r in P.relators]
    table: list[list[int]] = [[-1] * m2]
    parent = [0]

    def rep(c: int) -> int:
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(c: int, x: int) -> int:
        if len(table) >= bound:
            raise ResourceExceeded(f"coset table did not close within {bound} cosets")
        d = len(table)
        table.append([-1] * m2)
        parent.append(d)
        table[c][x] = d
        table[d][x ^ 1] = c
        return d

    def merge(k: int, l: int, queue: list[int]) -> None:
        k, l = rep(k), rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        parent[l] = k
        queue.append(l)

    def coincidence(a: int, b: int) -> None:
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = table[e]
            for x in range(m2):
                f = row[x]
                if f < 0:
                    continue
                if table[f][x ^ 1] == e:
                    table[f][x ^ 1] = -1
                e1, f1 = rep(e), rep(f)
                if table[e1][x] >= 0:
                    merge(f1, table[e1][x], queue)
                elif table[f1][x ^ 1] >= 0:
                    merge(e1, table[f1][x ^ 1], queue)
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1

    def scan_and_fill(c: int, w: Word) -> None:
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            define(f, w[i])

    c = 0
    while c < len(table):
        for r in rels:
            if parent[c] != c:
                break
            scan_and_fill(c, r)
        if parent[c] == c:
            for x in range(m2):
                if table[c][x] < 0:
                    define(c, x)
        c += 1

    # standardize: BFS numbering from the identity coset
    start = rep(0)
    order = {start: 0}
    queue = [start]
    k = 0
    while k < len(queue):
        cur = queue[k]
        k += 1
        for x in range(m2):
            d = rep(table[cur][x])
            if d not in order:
                order[d] = len(queue)
                queue.append(d)
    std = [[order[rep(table[cur][x])] for x in range(m2)] for cur in queue]
    return CosetTable(std, P.rank, len(table))


class CosetTableGroup(MarkedGroup):
    """Finite group defined by a presentation whose coset table closed.

    Elements are the standardized coset numbers; 0 is the identity.
    """

    engine = "coset-table"
    is_finite = True

    def __init__(self, presentation: FinitePresentation, bound: int = DEFAULT_COSET_BOUND,
                 table: CosetTable | None = None):
        super().__init__(presentation.generators)
        self.presentation = presentation
        self.table = table if table is not None else coset_enumerate(presentation, bound)
        rows = self.table.table
        n = len(rows)
        # shortlex-least word for each element (the BFS tree)
        words: list[Word | None] = [None] * n
        words[0] = ()
        frontier = [0]
        while frontier:
            nxt = []
            for g in frontier:
                for x in range(2 * self.rank):
                    h = rows[g][x]
                    if words[h] is None:
                        words[h] = words[g] + (x,)
                        nxt.append(h)
            frontier = nxt
        self._words = words
        self._inv = [self._apply(0, inverse_word(w)) for w in words]
        self._mul_cache: dict[tuple[int, int], int] = {}

    def _apply(self, g: int, w: Word) -> int:
        rows = self.table.table
        for x in w:
            g = rows[g][x]
        return g

    @property
    def identity(self) -> int:
        return 0

    def generator(self, i: int) -> int:
        return self.table.table[0][2 * i]

    def mul_letter(self, g: int, code: int) -> int:
        return self.table.table[g][code]

    def mul(self, g: int, h: int) -> int:
        key = (g, h)
        out = self._mul_cache.get(key)
        if out is None:
            out = self._mul_cache[key] = self._apply(g, self._words[h])
        return out

    def inv(self, g: int) -> int:
        return self._inv[g]

    def order(self) -> int:
        return self.table.order

    def elements(self) -> list[int]:
        return list(range(self.table.order))

    def relators(self):
        return list(self.presentation.relators)

    def word_of(self, g: int) -> Word:
        return self._words[g]

    def encode(self, g: int) -> bytes:
        return b"" if g == 0 else str(g).encode("ascii")


def _element_power(G: MarkedGroup, g, n: int):
    out = G.identity
    for _ in range(n):
        out = G.mul(out, g)
    return out


def burnside_group(rank: int = 2, exponent: int = 3, word_length: int = 2,
                   bound: int = DEFAULT_COSET_BOUND, names: Sequence[str] | None = None,
                   max_rounds: int = 20) -> CosetTableGroup:
    """Self-validating engine for a finite free Burnside group B(rank, exponent).

    Starts from the relators w^exponent for all reduced words w of length
    <= word_length, enumerates, then checks g^exponent = 1 for every element.
    Each violation adds (word of g)^exponent as a relator and the enumeration
    is repeated.  Every relator is a consequence of the law, so once the law
    holds on all elements the closed table is exactly B(rank, exponent).
    """
    if names is None:
        names = "abcdefghijklmnopqrstuvwxyz"[:rank] if rank <= 26 else [f"x{i}" for i in range(1, rank + 1)]
    seen = set()
    rels: list[Word] = []

    def add(w: Word) -> None:
        r = _cyclic_reduce(reduce_word(power(w, exponent)))
        if r and r not in seen and inverse_word(r) not in seen:
            seen.add(r)
            rels.append(r)

    for length in range(1, word_length + 1):
        for w in reduced_words(rank, length):
            add(w)
    for _ in range(max_rounds):
        P = FinitePresentation(tuple(names), tuple(rels))
        G = CosetTableGroup(P, bound)
        bad = [g for g in G.elements() if _element_power(G, g, exponent) != G.identity]
        if not bad:
            G.engine = "coset-table"
            G.law = ("exponent", exponent)
            return G
        for g in bad:
            add(G.word_of(g))
    raise ResourceExceeded(f"exponent law still failing after {max_rounds} augmentation rounds")


def _cyclic_reduce(w: Word) -> Word:
    while len(w) >= 2 and w[0] == w[-1] ^ 1:
        w = w[1:-1]
    return w

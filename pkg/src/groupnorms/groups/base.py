"""Common interface for marked-group engines.

Every engine keeps elements as canonical hashable Python values, so two
elements are equal exactly when the values are equal.  ``encode`` turns a
value into the canonical byte form used for reports; the identity always
encodes to ``b""``.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from collections import defaultdict
from typing import Hashable, Iterable, Sequence

from ..errors import ResourceExceeded
from ..words import Word, letter_gen

Element = Hashable


class MarkedGroup(ABC):
    """A group engine paired with an ordered generating tuple ``generators``."""

    engine: str = "abstract"

    def __init__(self, generators: Sequence[str]):
        generators = tuple(generators)
        if not generators:
            raise ValueError("a marked group needs at least one generator")
        if len(set(generators)) != len(generators):
            raise ValueError(f"generator names must be distinct: {generators}")
        self.generators = generators
        self._letters: list[Element] | None = None

    @property
    def rank(self) -> int:
        return len(self.generators)

    def __repr__(self):
        return f"{type(self).__name__}({' '.join(self.generators)})"

    # -- group structure ----------------------------------------------------

    @property
    @abstractmethod
    def identity(self) -> Element: ...

    @abstractmethod
    def generator(self, i: int) -> Element:
        """Image of the i-th generator."""

    @abstractmethod
    def mul(self, g: Element, h: Element) -> Element: ...

    @abstractmethod
    def inv(self, g: Element) -> Element: ...

    def letter_element(self, code: int) -> Element:
        if self._letters is None:
            letters = []
            for i in range(self.rank):
                x = self.generator(i)
                letters += [x, self.inv(x)]
            self._letters = letters
        return self._letters[code]

    def mul_letter(self, g: Element, code: int) -> Element:
        return self.mul(g, self.letter_element(code))

    # -- optional capabilities ---------------------------------------------

    is_finite: bool = False

    def order(self) -> int | None:
        return None

    def elements(self) -> list[Element]:
        raise NotImplementedError(f"{self.engine} engine cannot list its elements")

    def relators(self) -> list[Word] | None:
        """Defining relators when a finite presentation is known, else ``None``."""
        return None

    def word_of(self, g: Element) -> Word:
        """Some word over the generators evaluating to ``g``."""
        raise NotImplementedError(f"{self.engine} engine cannot produce words for elements")

    def distance_lower_bound(self, g: Element) -> int:
        """A lower bound on the word length of ``g``; used only for pruning."""
        return 0

    def encode(self, g: Element) -> bytes:
        if g == self.identity:
            return b""
        return repr(g).encode("ascii")

    def is_identity(self, g: Element) -> bool:
        return g == self.identity

    def describe(self, g: Element) -> str:
        try:
            from ..words import format_word
            return format_word(self.word_of(g), self.generators)
        except NotImplementedError:
            return repr(g)

    def word(self, text: str) -> Word:
        from ..words import parse_word
        return parse_word(text, self.generators)

    def element(self, text: str) -> Element:
        return evaluate_word(self, self.word(text))


def evaluate_word(G: MarkedGroup, w: Iterable[int]) -> Element:
    """Image of a word under F(X) -> G, as a canonical element."""
    g = G.identity
    for c in w:
        if letter_gen(c) >= G.rank:
            raise ValueError(f"letter {c} does not index into {G!r}")
        g = G.mul_letter(g, c)
    return g


def conjugate(G: MarkedGroup, y: Element, g: Element) -> Element:
    """y g y^-1."""
    return G.mul(G.mul(y, g), G.inv(y))


def ball_enumerate(G: MarkedGroup, r: int | None, cap: int = 10**6) -> dict[Element, list[int]]:
    """Count reduced words of each length <= r hitting each element.

    Returns ``{element: [count at length 0, ..., count at length r]}``.  With
    ``r=None`` the radius grows until a sphere adds no new element, which
    happens exactly when the whole (finite) group has been reached.
    """
    m2 = 2 * G.rank
    states: dict[tuple[Element, int], int] = {(G.identity, -1): 1}
    profile: dict[Element, list[int]] = {G.identity: [1]}
    k = 0
    while r is None or k < r:
        k += 1
        nxt: dict[tuple[Element, int], int] = defaultdict(int)
        for (g, last), cnt in states.items():
            for c in range(m2):
                if last >= 0 and c == last ^ 1:
                    continue
                nxt[(G.mul_letter(g, c), c)] += cnt
        layer: dict[Element, int] = defaultdict(int)
        for (g, _), cnt in nxt.items():
            layer[g] += cnt
        new = 0
        for g, cnt in layer.items():
            row = profile.get(g)
            if row is None:
                new += 1
                row = profile[g] = [0] * k
            row.extend([0] * (k - len(row)))
            row.append(cnt)
        if len(profile) > cap:
            raise ResourceExceeded(f"ball enumeration exceeded {cap} elements at radius {k}")
        for row in profile.values():
            row.extend([0] * (k + 1 - len(row)))
        states = nxt
        if r is None and new == 0:
            break
    return profile


def sphere_bfs(G: MarkedGroup, radius: int, cap: int = 10**6) -> list[list[Element]]:
    """Spheres S_0..S_radius of the Cayley graph, by breadth-first search on elements."""
    seen = {G.identity}
    spheres = [[G.identity]]
    for _ in range(radius):
        layer = []
        for g in spheres[-1]:
            for c in range(2 * G.rank):
                h = G.mul_letter(g, c)
                if h not in seen:
                    seen.add(h)
                    layer.append(h)
        if len(seen) > cap:
            raise ResourceExceeded(f"ball exceeded {cap} elements")
        spheres.append(layer)
        if not layer:
            break
    return spheres

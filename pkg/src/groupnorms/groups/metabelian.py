"""F/[N,N] for a finite quotient G = F/N, via Fox calculus (Magnus embedding).

An element of F/[N,N] is stored as (image in G, (d_1, ..., d_m)) where d_j is
the Fox derivative of a representing word with respect to x_j, pushed into
the integral group ring ZG.  The Magnus embedding makes this injective, so
the pair is a canonical form.  Group-ring elements are sorted tuples of
``(group element, nonzero integer)`` pairs.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable

from ..words import Word, letter_gen, letter_sign
from .base import MarkedGroup, evaluate_word

RingElement = tuple


def _freeze(d: dict) -> RingElement:
    return tuple(sorted((g, c) for g, c in d.items() if c))


def ring_left_mul(G: MarkedGroup, g, d: RingElement) -> RingElement:
    return tuple(sorted((G.mul(g, h), c) for h, c in d))


def ring_add(a: RingElement, b: RingElement, scale: int = 1) -> RingElement:
    if not b:
        return a
    out = defaultdict(int, a)
    for h, c in b:
        out[h] += scale * c
    return _freeze(out)


def fox_derivative(w: Iterable[int], x: int, G: MarkedGroup) -> dict:
    """The free derivative d w / d x_x evaluated in ZG, as ``{element: coefficient}``.

    Uses d(uv) = du + u dv, dx/dx = 1 and dx^-1/dx = -x^-1, scanning ``w``
    left to right with the running prefix image.
    """
    out: dict = defaultdict(int)
    prefix = G.identity
    for c in w:
        if letter_gen(c) == x:
            if letter_sign(c) == 1:
                out[prefix] += 1
            else:
                out[G.mul_letter(prefix, c)] -= 1
        prefix = G.mul_letter(prefix, c)
    return {g: k for g, k in out.items() if k}


class MetabelianizedGroup(MarkedGroup):
    """F(X)/[N,N] where N is the kernel of F(X) -> ``base`` (a finite engine)."""

    engine = "metabelianized"

    def __init__(self, base: MarkedGroup):
        if not base.is_finite:
            raise ValueError("the base quotient must be a finite, fully enumerated engine")
        super().__init__(base.generators)
        self.base = base
        self.base_elements = base.elements()

    @property
    def identity(self):
        return (self.base.identity, ((),) * self.rank)

    def generator(self, i: int):
        d = [()] * self.rank
        d[i] = ((self.base.identity, 1),)
        return (self.base.generator(i), tuple(d))

    def mul(self, g, h):
        B = self.base
        g0, dg = g
        h0, dh = h
        moved = tuple(ring_add(a, ring_left_mul(B, g0, b)) for a, b in zip(dg, dh))
        return (B.mul(g0, h0), moved)

    def inv(self, g):
        B = self.base
        g0, dg = g
        gi = B.inv(g0)
        return (gi, tuple(ring_add((), ring_left_mul(B, gi, d), -1) for d in dg))

    def mul_letter(self, g, code: int):
        B = self.base
        g0, dg = g
        i = letter_gen(code)
        if letter_sign(code) == 1:
            d = list(dg)
            d[i] = ring_add(d[i], ((g0, 1),))
            return (B.mul_letter(g0, code), tuple(d))
        new0 = B.mul_letter(g0, code)
        d = list(dg)
        d[i] = ring_add(d[i], ((new0, -1),))
        return (new0, tuple(d))

    def in_kernel_of_base(self, w: Word) -> bool:
        return self.base.is_identity(evaluate_word(self.base, w))

    def encode(self, g) -> bytes:
        if g == self.identity:
            return b""
        return repr(g).encode("ascii")


def metabelian_is_trivial(M: MetabelianizedGroup, w: Word) -> bool:
    """True iff w lies in [N, N]: w in N and every Fox derivative vanishes in ZG."""
    if not M.in_kernel_of_base(w):
        return False
    return all(not fox_derivative(w, j, M.base) for j in range(M.rank))


def schreier_is_trivial(base: MarkedGroup, w: Word) -> bool:
    """Independent [N, N] test by Reidemeister-Schreier rewriting.

    N is free on the Schreier generators gamma(c, x) = rep(c) x rep(cx)^-1
    for the non-tree edges of the coset graph (transversal = the engine's
    prefix-closed shortlex words).  w is in [N, N] iff w is in N and each
    Schreier generator has exponent sum 0 in the rewritten word.
    """
    reps = {g: base.word_of(g) for g in base.elements()}
    tree = set()  # edges stored as (source, positive letter)
    for g, word in reps.items():
        if word:
            parent = evaluate_word(base, word[:-1])
            x = word[-1]
            tree.add((parent, x) if letter_sign(x) == 1 else (g, x ^ 1))
    sums: dict = defaultdict(int)
    c = base.identity
    for code in w:
        d = base.mul_letter(c, code)
        edge, step = ((c, code), 1) if letter_sign(code) == 1 else ((d, code ^ 1), -1)
        if edge not in tree:
            sums[edge] += step
        c = d
    if not base.is_identity(c):
        return False
    return all(v == 0 for v in sums.values())

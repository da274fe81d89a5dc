"""The groups H_n = < t, a_{-n..n} | t^-1 a_k t = a_{k+1}, a_i^2, [a_i, a_j] >.

H_n is an HNN extension of A_n = (Z_2)^{2n+1} with stable letter t and
associated subgroups B_down = <a_{-n}..a_{n-1}> and B_up = <a_{-n+1}..a_n>,
identified by the shift u -> t^-1 u t.  Elements of A_n are bitmasks, bit
``k + n`` standing for a_k.  Generator 0 is t, generator ``1 + k + n`` is a_k.

Two independent word problems are provided: the engine multiplies in a
right-transversal normal form, while :func:`britton_reduce` removes pinches
from words.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..words import Word, letter, letter_sign
from .base import MarkedGroup


def hn_generator_names(n: int) -> list[str]:
    return ["t"] + [f"a_{k}" for k in range(-n, n + 1)]


class HnGroup(MarkedGroup):
    """Element = (syllables, tail): g = c_1 t^e_1 ... c_k t^e_k * tail.

    Each c_i is a transversal representative (0 or the top bit before t, 0 or
    the bottom bit before t^-1) and no t^e c t^-e with c in the relevant
    associated subgroup survives.
    """

    engine = "hn"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("H_n needs n >= 1")
        self.n = n
        super().__init__(hn_generator_names(n))
        self.width = 2 * n + 1
        self.full = (1 << self.width) - 1
        self.top = 1 << (self.width - 1)
        self.bottom = 1

    # shift: t^-1 a_k t = a_{k+1} moves bits up
    def up(self, u: int) -> int:
        return u << 1

    def down(self, u: int) -> int:
        return u >> 1

    def in_down_subgroup(self, u: int) -> bool:
        return not u & self.top

    def in_up_subgroup(self, u: int) -> bool:
        return not u & self.bottom

    @property
    def identity(self):
        return ((), 0)

    def a(self, k: int) -> int:
        return 1 << (k + self.n)

    def generator(self, i: int):
        if i == 0:
            return (((0, 1),), 0)
        return ((), 1 << (i - 1))

    def mul_a(self, g, u: int):
        syl, tail = g
        return (syl, tail ^ u)

    def mul_t(self, g, e: int):
        syl, c = g
        if e == 1:
            if syl and syl[-1][1] == -1 and self.in_down_subgroup(c):
                prev = syl[-1][0]
                return (syl[:-1], prev ^ self.up(c))
            r = c & self.top
            return (syl + ((r, 1),), self.up(c ^ r))
        if syl and syl[-1][1] == 1 and self.in_up_subgroup(c):
            prev = syl[-1][0]
            return (syl[:-1], prev ^ self.down(c))
        r = c & self.bottom
        return (syl + ((r, -1),), self.down(c ^ r))

    def mul_letter(self, g, code: int):
        i = code >> 1
        if i == 0:
            return self.mul_t(g, letter_sign(code))
        return self.mul_a(g, 1 << (i - 1))

    def mul(self, g, h):
        for c, e in h[0]:
            if c:
                g = self.mul_a(g, c)
            g = self.mul_t(g, e)
        return self.mul_a(g, h[1]) if h[1] else g

    def inv(self, g):
        out = self.identity
        syl, tail = g
        if tail:
            out = self.mul_a(out, tail)
        for c, e in reversed(syl):
            out = self.mul_t(out, -e)
            if c:
                out = self.mul_a(out, c)
        return out

    def a_word(self, u: int) -> Word:
        return tuple(letter(1 + b) for b in range(self.width) if u >> b & 1)

    def word_of(self, g) -> Word:
        out: list[int] = []
        for c, e in g[0]:
            out += self.a_word(c)
            out.append(letter(0, e))
        out += self.a_word(g[1])
        return tuple(out)

    def distance_lower_bound(self, g) -> int:
        return len(g[0])

    def relators(self):
        n = self.n
        t = letter(0)
        rels = []
        for k in range(-n, n):
            ak, ak1 = letter(1 + k + n), letter(1 + k + 1 + n)
            rels.append((t ^ 1, ak, t, ak1 ^ 1))
        for i in range(self.width):
            ai = letter(1 + i)
            rels.append((ai, ai))
            for j in range(i + 1, self.width):
                aj = letter(1 + j)
                rels.append((ai, aj, ai ^ 1, aj ^ 1))
        return rels

    def encode(self, g) -> bytes:
        if g == self.identity:
            return b""
        return ";".join(f"{c}{'+' if e == 1 else '-'}" for c, e in g[0]).encode() + b"/" + str(g[1]).encode()

    def base_elements(self) -> range:
        return range(1 << self.width)


@dataclass(frozen=True)
class BrittonForm:
    """Alternating decomposition u_0 t^{e_1} u_1 ... t^{e_k} u_k (u_i in A_n as bitmasks)."""

    pieces: tuple
    exponents: tuple

    @property
    def t_length(self) -> int:
        return len(self.exponents)

    @property
    def t_exponent_sum(self) -> int:
        return sum(self.exponents)

    def is_identity(self) -> bool:
        return not self.exponents and self.pieces == (0,)

    def to_word(self, H: HnGroup) -> Word:
        out: list[int] = list(H.a_word(self.pieces[0]))
        for e, u in zip(self.exponents, self.pieces[1:]):
            out.append(letter(0, e))
            out += H.a_word(u)
        return tuple(out)


def britton_reduce(H: HnGroup, w: Word) -> BrittonForm:
    """Eliminate every pinch t^-1 u t (u in B_down) and t u t^-1 (u in B_up).

    The stack holds alternating base pieces and t-exponents; a pinch can only
    appear where a new t-letter meets the top of the stack, so one pass
    suffices.
    """
    pieces = [0]
    exps: list[int] = []
    for code in w:
        i = code >> 1
        if i:
            pieces[-1] ^= 1 << (i - 1)
            continue
        e = letter_sign(code)
        u = pieces[-1]
        if exps and exps[-1] == -e:
            if e == 1 and H.in_down_subgroup(u):
                exps.pop()
                pieces.pop()
                pieces[-1] ^= H.up(u)
                continue
            if e == -1 and H.in_up_subgroup(u):
                exps.pop()
                pieces.pop()
                pieces[-1] ^= H.down(u)
                continue
        exps.append(e)
        pieces.append(0)
    return BrittonForm(tuple(pieces), tuple(exps))


def has_pinch(H: HnGroup, form: BrittonForm) -> bool:
    """Independent scan for a remaining pinch in a decomposition."""
    for k in range(len(form.exponents) - 1):
        e1, e2 = form.exponents[k], form.exponents[k + 1]
        u = form.pieces[k + 1]
        if e1 == -1 and e2 == 1 and H.in_down_subgroup(u):
            return True
        if e1 == 1 and e2 == -1 and H.in_up_subgroup(u):
            return True
    return False


def conjugation_certificates(H: HnGroup, power: int | None = None) -> list[tuple[int, BrittonForm]]:
    """Britton forms of t^-p u t^p for every nontrivial u in A_n (p = 2n+1 by default).

    Each form with a nonzero number of t-letters certifies t^-p u t^p is not
    in A_n, so together they certify t^-p A_n t^p meets A_n trivially.
    """
    p = 2 * H.n + 1 if power is None else power
    t_inv, t = letter(0, -1), letter(0)
    out = []
    for u in range(1, 1 << H.width):
        w = (t_inv,) * p + H.a_word(u) + (t,) * p
        out.append((u, britton_reduce(H, w)))
    return out

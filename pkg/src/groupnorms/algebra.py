"""Exact group-algebra arithmetic over Q with the canonical trace.

Elements are finitely supported maps from canonical group elements to
Fractions.  Trace-power sequences are computed in integers: for
``a = A / D`` with integral ``A``, tau((a*a)^n) = tau((A*A)^n) / D^(2n).
"""
from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, InvariantViolated, ResourceExceeded
from .groups.base import MarkedGroup, evaluate_word
from .words import parse_word

DEFAULT_SUPPORT_CAP = 10**7


class AlgebraElement:
    """An element of QG; immutable, zero coefficients never stored."""

    __slots__ = ("group", "_coeffs")

    def __init__(self, group: MarkedGroup, coeffs: Mapping | Iterable = ()):
        self.group = group
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        data = {}
        for g, c in items:
            c = Fraction(c)
            if c:
                data[g] = c
        self._coeffs = data

    @classmethod
    def _raw(cls, group, data: dict) -> "AlgebraElement":
        obj = cls.__new__(cls)
        obj.group = group
        obj._coeffs = data
        return obj

    @property
    def coeffs(self) -> Mapping:
        return MappingProxyType(self._coeffs)

    def __getitem__(self, g) -> Fraction:
        return self._coeffs.get(g, Fraction(0))

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraElement):
            return self.group is other.group and self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self == AlgebraElement(self.group, {self.group.identity: other})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def _check(self, other: "AlgebraElement") -> None:
        if other.group is not self.group:
            raise ValueError("elements belong to different groups")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraElement(self.group, {self.group.identity: other})
        self._check(other)
        out = dict(self._coeffs)
        for g, c in other._coeffs.items():
            v = out.get(g, 0) + c
            if v:
                out[g] = v
            else:
                out.pop(g, None)
        return AlgebraElement._raw(self.group, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._raw(self.group, {g: -c for g, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        other = Fraction(other)
        if not other:
            return AlgebraElement(self.group)
        return AlgebraElement._raw(self.group, {g: c * other for g, c in self._coeffs.items()})

    def __rmul__(self, other):
        return self * other

    def star(self) -> "AlgebraElement":
        return involute(self)

    def trace(self) -> Fraction:
        return trace(self)

    def l1_norm(self) -> Fraction:
        return sum((abs(c) for c in self._coeffs.values()), Fraction(0))

    def l2_squared(self) -> Fraction:
        return sum((c * c for c in self._coeffs.values()), Fraction(0))

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self._coeffs.values())

    def terms(self) -> list:
        """Support in a deterministic order (by canonical encoding)."""
        enc = self.group.encode
        return sorted(self._coeffs.items(), key=lambda kv: (len(enc(kv[0])), enc(kv[0])))

    def __repr__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for g, c in self.terms():
            name = "1" if self.group.is_identity(g) else f"({self.group.describe(g)})"
            parts.append(f"{c}*{name}")
        return " + ".join(parts)


def build_element(G: MarkedGroup, terms: Iterable[tuple[Sequence[int], object]]) -> AlgebraElement:
    """Sum of coefficient * (image of word); coefficients of equal elements add up."""
    out: dict = defaultdict(Fraction)
    for w, c in terms:
        out[evaluate_word(G, w)] += Fraction(c)
    return AlgebraElement(G, out)


def group_element(G: MarkedGroup, g, coeff=1) -> AlgebraElement:
    return AlgebraElement(G, {g: coeff})


def one(G: MarkedGroup) -> AlgebraElement:
    return AlgebraElement(G, {G.identity: 1})


def _convolve_dicts(G: MarkedGroup, x: dict, y: dict, cap: int) -> dict:
    out: dict = defaultdict(int)
    mul = G.mul
    yi = list(y.items())
    for g, a in x.items():
        for h, b in yi:
            out[mul(g, h)] += a * b
        if len(out) > cap:
            raise ResourceExceeded(f"convolution support exceeded {cap} terms")
    return {g: c for g, c in out.items() if c}


def convolve(a: AlgebraElement, b: AlgebraElement, cap: int = DEFAULT_SUPPORT_CAP) -> AlgebraElement:
    """(a*b)(g) = sum_h a(h) b(h^-1 g), exact."""
    a._check(b)
    return AlgebraElement._raw(a.group, _convolve_dicts(a.group, a._coeffs, b._coeffs, cap))


def involute(a: AlgebraElement) -> AlgebraElement:
    """(sum c_g g)* = sum c_g g^-1 (coefficients are rational, so no conjugation)."""
    inv = a.group.inv
    return AlgebraElement._raw(a.group, {inv(g): c for g, c in a._coeffs.items()})


def trace(a: AlgebraElement) -> Fraction:
    """Canonical trace: the coefficient of the identity."""
    return a._coeffs.get(a.group.identity, Fraction(0))


def trace_of_product(G: MarkedGroup, x: Mapping, y: Mapping):
    """tau(x * y) = sum_g x(g) y(g^-1) without forming the product."""
    inv = G.inv
    if len(y) < len(x):
        x, y = y, x
        total = 0
        for g, c in x.items():
            d = y.get(inv(g))
            if d:
                total += d * c
        return total
    total = 0
    for g, c in x.items():
        d = y.get(inv(g))
        if d:
            total += c * d
    return total


def averaging_operator(G: MarkedGroup, symmetrized: bool = False) -> AlgebraElement:
    """A_X = (1/|X|) sum x, or (A_X + A_{X^-1}) / 2 when symmetrized.

    Coefficients of generators that coincide in G accumulate.
    """
    m = G.rank
    out: dict = defaultdict(Fraction)
    for i in range(m):
        x = G.generator(i)
        if symmetrized:
            out[x] += Fraction(1, 2 * m)
            out[G.inv(x)] += Fraction(1, 2 * m)
        else:
            out[x] += Fraction(1, m)
    return AlgebraElement(G, out)


def integral_scaling(a: AlgebraElement) -> tuple[dict, int]:
    """(A, D) with A integral and a = A / D, D the least common denominator."""
    D = 1
    for c in a._coeffs.values():
        D = D * c.denominator // math.gcd(D, c.denominator)
    return {g: int(c * D) for g, c in a._coeffs.items()}, D


@dataclass
class TracePowerSequence:
    """tau((a*a)^n) for n = 1..N, stored as integers ``counts[n-1] / scale^(2n)``."""

    element: AlgebraElement
    counts: list
    scale: int
    method: str = "convolution"
    _traces: list | None = field(default=None, repr=False)

    @property
    def depth(self) -> int:
        return len(self.counts)

    @property
    def traces(self) -> list[Fraction]:
        if self._traces is None:
            self._traces = [Fraction(c, self.scale ** (2 * n)) for n, c in enumerate(self.counts, 1)]
        return self._traces

    def trace(self, n: int) -> Fraction:
        return Fraction(self.counts[n - 1], self.scale ** (2 * n))

    def log_trace(self, n: int) -> float:
        return math.log(self.counts[n - 1]) - 2 * n * math.log(self.scale)

    @property
    def bounds(self) -> list[float]:
        """tau((a*a)^n)^(1/2n): certified lower bounds for the operator norm of a."""
        return [math.exp(self.log_trace(n) / (2 * n)) for n in range(1, self.depth + 1)]

    def check(self) -> None:
        """Exact checks: positivity, l2 at n=1, monotone bounds, the l1 ceiling."""
        a = self.element
        if any(c <= 0 for c in self.counts):
            raise InvariantViolated("positive traces", "tau((a*a)^n) <= 0")
        if self.trace(1) != a.l2_squared():
            raise InvariantViolated("tau(a*a) = ||a||_2^2")
        A, D = integral_scaling(a)
        # rescale counts to the canonical integral scaling D
        l1 = sum(abs(c) for c in A.values())
        for n in range(1, self.depth + 1):
            if self.trace(n) > Fraction(l1, D) ** (2 * n):
                raise InvariantViolated("tau((a*a)^n) <= ||a||_1^(2n)", f"n={n}")
        for n in range(1, self.depth):
            c0, c1 = self.counts[n - 1], self.counts[n]
            if c1 ** n < c0 ** (n + 1):
                raise InvariantViolated("nondecreasing bounds", f"n={n}")


def power_trace_counts(A: dict, G: MarkedGroup, N: int, cap: int = DEFAULT_SUPPORT_CAP) -> list[int]:
    """Integer traces tau((A*A)^n), n = 1..N, by repeated convolution.

    Only b^k for k <= ceil(N/2) is formed (b = A*A); tau(b^n) is read off as
    tau(b^ceil(n/2) * b^floor(n/2)).
    """
    inv = G.inv
    Astar = {inv(g): c for g, c in A.items()}
    b = _convolve_dicts(G, Astar, A, cap)
    powers = [{G.identity: 1}, b]
    half = (N + 1) // 2
    while len(powers) <= half:
        powers.append(_convolve_dicts(G, powers[-1], b, cap))
    counts = []
    for n in range(1, N + 1):
        counts.append(trace_of_product(G, powers[(n + 1) // 2], powers[n // 2]))
    return counts


def letter_weights(a: AlgebraElement) -> dict | None:
    """For a free-group element supported on single letters, ``{letter: coeff}``; else None."""
    from .groups.free import FreeGroup
    if not isinstance(a.group, FreeGroup):
        return None
    out = {}
    for g, c in a._coeffs.items():
        if len(g) != 1:
            return None
        out[g[0]] = c
    return out


def tree_power_trace_counts(weights: dict, rank: int, N: int) -> list[int]:
    """Integer traces tau((A*A)^n) for A = sum_l w_l * l in the free group of ``rank``.

    A*A is a two-phase nearest-neighbour walk on the Cayley tree (a step of
    A* then a step of A).  Closed walks decompose into first-return
    excursions; with z marking step pairs,

        E[p][l] = w_p(l) w_{1-p}(l^-1) z R[1-p][l]
        R[q][l] = 1 / (1 - sum_{l' != l^-1} E[q][l'])
        return series = 1 / (1 - sum_l E[0][l]),

    where w_0 is the step law of A* and w_1 that of A.  Coefficients are
    produced one degree at a time, so the cost is O(N^2) per letter.
    """
    m2 = 2 * rank
    w1 = [weights.get(l, 0) for l in range(m2)]
    w0 = [weights.get(l ^ 1, 0) for l in range(m2)]  # A* puts coefficient of l on l^-1
    w = (w0, w1)
    pair = [[w[p][l] * w[1 - p][l ^ 1] for l in range(m2)] for p in (0, 1)]
    active = [[l for l in range(m2) if pair[p][l]] for p in (0, 1)]
    # series are lists indexed by degree; E[p][l][0] = 0, R[q][l][0] = 1
    E = [[[0] * (N + 1) for _ in range(m2)] for _ in (0, 1)]
    R = [[[1] + [0] * N for _ in range(m2)] for _ in (0, 1)]
    S = [[[0] * (N + 1) for _ in range(m2)] for _ in (0, 1)]
    T = [0] * (N + 1)
    Gs = [1] + [0] * N
    for d in range(1, N + 1):
        for p in (0, 1):
            for l in active[p]:
                E[p][l][d] = pair[p][l] * R[1 - p][l][d - 1]
        for q in (0, 1):
            tot = sum(E[q][l][d] for l in active[q])
            for l in range(m2):
                S[q][l][d] = tot - E[q][l ^ 1][d]
                s, r = S[q][l], R[q][l]
                R[q][l][d] = sum(s[j] * r[d - j] for j in range(1, d + 1))
        T[d] = sum(E[0][l][d] for l in active[0])
        Gs[d] = sum(T[j] * Gs[d - j] for j in range(1, d + 1))
    return Gs[1:]


def power_trace_sequence(a: AlgebraElement, N: int, method: str = "auto",
                         cap: int = DEFAULT_SUPPORT_CAP, check: bool = True) -> TracePowerSequence:
    """Exact tau((a*a)^n) for n = 1..N.

    ``method`` is ``"convolution"`` (any engine), ``"tree"`` (free groups,
    support on letters only) or ``"auto"`` (tree when applicable).
    """
    if N < 1:
        raise ValueError("depth must be >= 1")
    if not a:
        raise ValueError("the zero element has no trace-power sequence")
    if method not in ("auto", "tree", "convolution"):
        raise ValueError(f"unknown method {method!r}")
    A, D = integral_scaling(a)
    weights = letter_weights(a) if method in ("auto", "tree") else None
    if method == "tree" and weights is None:
        raise ValueError("tree method needs a free-group element supported on letters")
    if weights is not None:
        iw = {l: int(c * D) for l, c in weights.items()}
        counts = tree_power_trace_counts(iw, a.group.rank, N)
        used = "tree"
    else:
        counts = power_trace_counts(A, a.group, N, cap)
        used = "convolution"
    seq = TracePowerSequence(a, counts, D, used)
    if check:
        seq.check()
    return seq


# --- expression syntax -----------------------------------------------------

_COEF = re.compile(r"\s*(\d+(?:/\d+)?)\s*(\*)?\s*")


def parse_element(G: MarkedGroup, text: str, source: str | None = None) -> AlgebraElement:
    """Parse ``"1 + 2*(x y^-1) - 3/2*(x)"``.

    Terms are joined by ``+``/``-`` at parenthesis depth 0; each term is an
    optional rational coefficient (with optional ``*``) followed by ``1``, a
    parenthesised word, or a bare word.
    """
    terms = []
    depth = 0
    start = 0
    sign = 1
    pieces = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ConfigError("unbalanced ')'", 1, i + 1, source)
        elif ch in "+-" and depth == 0 and not text[max(0, i - 1):i].endswith("^"):
            pieces.append((sign, start, text[start:i]))
            sign = 1 if ch == "+" else -1
            start = i + 1
    if depth:
        raise ConfigError("unbalanced '('", 1, len(text), source)
    pieces.append((sign, start, text[start:]))
    for k, (sgn, col, piece) in enumerate(pieces):
        if not piece.strip():
            if k == 0 and len(pieces) > 1:
                continue
            raise ConfigError("empty term", 1, col + 1, source)
        coef = Fraction(1)
        body = piece
        m = _COEF.match(piece)
        if m:
            rest = piece[m.end():]
            if m.group(2) or not rest.strip() or rest.lstrip().startswith("("):
                coef = Fraction(m.group(1))
                body = rest
                col += m.end()
        body = body.strip()
        if body in ("", "1"):
            w = ()
        else:
            if body.startswith("(") and body.endswith(")"):
                body = body[1:-1]
            w = parse_word(body, G.generators, source=source, line=1, column=col)
        terms.append((w, sgn * coef))
    return build_element(G, terms)

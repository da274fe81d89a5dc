"""Independent reference computations used to derive frozen test values.

Nothing here imports the package's engines; groups are modelled by hand.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import product


def free_reduce(word):
    out = []
    for c in word:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def reduced_words(rank, length):
    for w in product(range(2 * rank), repeat=length):
        if all(w[i + 1] != w[i] ^ 1 for i in range(length - 1)):
            yield w


def walk_return_probability(rank, steps):
    """Brute force: fraction of all (2m)^steps letter sequences that freely reduce to 1."""
    hits = sum(1 for w in product(range(2 * rank), repeat=steps) if not free_reduce(w))
    return Fraction(hits, (2 * rank) ** steps)


def heisenberg3_mul(g, h):
    """Heisenberg group mod 3 = B(2,3); (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y')."""
    return ((g[0] + h[0]) % 3, (g[1] + h[1]) % 3, (g[2] + h[2] + g[0] * h[1]) % 3)


def heisenberg3_letter(c):
    a, b = (1, 0, 0), (0, 1, 0)
    gen = a if c // 2 == 0 else b
    if c % 2 == 0:
        return gen
    x, y, z = gen
    return ((-x) % 3, (-y) % 3, (-z + x * y) % 3)


def evaluate(word, mul, letter, identity):
    g = identity
    for c in word:
        g = mul(g, letter(c))
    return g


def cogrowth_bruteforce(rank, depth, is_trivial):
    gamma = [1]
    for k in range(1, depth + 1):
        gamma.append(gamma[-1] + sum(1 for w in reduced_words(rank, k) if is_trivial(w)))
    return gamma


def zn_trivial(orders):
    def check(w):
        v = [0] * len(orders)
        for c in w:
            v[c // 2] += -1 if c % 2 else 1
        return all((x % n == 0) if n else x == 0 for x, n in zip(v, orders))
    return check


def cayley_boundary(elements, neighbours, F):
    return sum(1 for f in F for h in neighbours(f) if h not in F)


def balanced_cheeger_bruteforce(elements, neighbours):
    from itertools import combinations
    best = None
    for size in range(1, len(elements) // 2 + 1):
        for F in combinations(elements, size):
            r = Fraction(cayley_boundary(elements, neighbours, set(F)), size)
            best = r if best is None or r < best else best
    return best


def matrix_trace_powers(elements, mul, support, N):
    """tau((a*a)^n) in a finite group via the regular representation (Fractions)."""
    idx = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    inv = {}
    for g in elements:
        for h in elements:
            if idx[mul(g, h)] == idx[elements[0]]:
                inv[g] = h
    # a*a as a dict
    b = Counter()
    for g, c in support.items():
        for h, d in support.items():
            b[mul(inv[g], h)] += c * d
    M = [[Fraction(0)] * n for _ in range(n)]
    for g in elements:
        for s, c in b.items():
            M[idx[mul(g, s)]][idx[g]] += c
    out = []
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(N):
        P = [[sum(P[i][k] * M[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        out.append(P[0][0])
    return out

"""Letters and words over X^{+-1}.

A letter is encoded as a small int: ``2*i`` is the i-th generator and
``2*i + 1`` its inverse, so ``code ^ 1`` inverts a letter.  A word is a
tuple of letter codes.
"""
from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

from .errors import ConfigError

Word = tuple


def letter(gen: int, sign: int = 1) -> int:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if gen < 0:
        raise ValueError(f"generator index must be nonnegative, got {gen}")
    return 2 * gen + (0 if sign == 1 else 1)


def letter_gen(code: int) -> int:
    return code >> 1


def letter_sign(code: int) -> int:
    return -1 if code & 1 else 1


def inverse_letter(code: int) -> int:
    return code ^ 1


def inverse_word(w: Sequence[int]) -> Word:
    return tuple(c ^ 1 for c in reversed(w))


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != w[i + 1] ^ 1 for i in range(len(w) - 1))


def reduce_word(w: Iterable[int]) -> Word:
    """Free reduction by a single left-to-right stack pass."""
    out: list[int] = []
    for c in w:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def power(w: Sequence[int], k: int) -> Word:
    if k >= 0:
        return tuple(w) * k
    return inverse_word(w) * (-k)


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """[u, v] = u v u^-1 v^-1."""
    return tuple(u) + tuple(v) + inverse_word(u) + inverse_word(v)


def exponent_sums(w: Sequence[int], rank: int) -> list[int]:
    sums = [0] * rank
    for c in w:
        sums[c >> 1] += letter_sign(c)
    return sums


def reduced_words(rank: int, length: int) -> Iterator[Word]:
    """All reduced words of exactly ``length`` letters, in lexicographic code order."""
    def extend(prefix: Word) -> Iterator[Word]:
        if len(prefix) == length:
            yield prefix
            return
        for c in range(2 * rank):
            if prefix and prefix[-1] == c ^ 1:
                continue
            yield from extend(prefix + (c,))
    yield from extend(())


# --- text syntax -----------------------------------------------------------

_TOKEN = re.compile(r"(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:-\d+)?)|(?P<lp>\()|(?P<rp>\))"
                    r"|\^\s*(?P<pow>[+-]?\d+)")


def _tokenize(text: str, source: str | None, line: int | None, col0: int):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ConfigError(f"unexpected character {text[pos]!r}", line, col0 + pos + 1, source)
        start = m.start()
        if m.group("name") is not None:
            tokens.append(("name", m.group("name"), col0 + start + 1))
        elif m.group("lp"):
            tokens.append(("(", None, col0 + start + 1))
        elif m.group("rp"):
            tokens.append((")", None, col0 + start + 1))
        else:
            tokens.append(("pow", int(m.group("pow")), col0 + start + 1))
        pos = m.end()
    return tokens


def parse_word(text: str, generators: Sequence[str], *, source: str | None = None,
               line: int | None = None, column: int = 0) -> Word:
    """Parse ``"a b^-1 (a b)^3"`` into a (not necessarily reduced) word.

    Letters are whitespace separated generator names with optional integer
    powers; parentheses group a subword. ``1`` or an empty string is the
    empty word.
    """
    index = {name: i for i, name in enumerate(generators)}
    stripped = text.strip()
    if stripped in ("", "1"):
        return ()
    tokens = _tokenize(text, source, line, column)
    pos = 0

    def parse_seq(depth: int) -> list[int]:
        nonlocal pos
        out: list[int] = []
        while pos < len(tokens):
            kind, val, col = tokens[pos]
            if kind == ")":
                if depth == 0:
                    raise ConfigError("unbalanced ')'", line, col, source)
                return out
            if kind == "pow":
                raise ConfigError("power without a base", line, col, source)
            pos += 1
            if kind == "(":
                piece = parse_seq(depth + 1)
                if pos >= len(tokens) or tokens[pos][0] != ")":
                    raise ConfigError("unbalanced '('", line, col, source)
                pos += 1
            else:
                if val not in index:
                    raise ConfigError(f"unknown generator {val!r}", line, col, source)
                piece = [letter(index[val])]
            if pos < len(tokens) and tokens[pos][0] == "pow":
                piece = list(power(piece, tokens[pos][1]))
                pos += 1
            out.extend(piece)
        if depth:
            raise ConfigError("unbalanced '('", line, None, source)
        return out

    return tuple(parse_seq(0))


def format_word(w: Sequence[int], generators: Sequence[str]) -> str:
    """Inverse of :func:`parse_word` on syllable level: ``a^2 b^-1``."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = generators[w[i] >> 1]
        k = (j - i) * letter_sign(w[i])
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    return " ".join(parts)

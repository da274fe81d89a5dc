"""Line-oriented group-definition files.

::

    # B(2,3) by an explicit presentation
    engine = coset-table
    generators = a b
    relators = a^3, b^3, (a b)^3, (a b^-1)^3

Relators are separated by commas.  Engine parameters: ``orders`` (abelian,
0 for Z), ``coset_bound`` (coset-table, burnside), ``exponent`` and
``word_length`` (burnside), ``hn_rank`` (hn, lamplighter), ``base``
(metabelianized) and ``factors`` (free-product; whitespace separated file
names).  File references are resolved relative to the referencing file.
"""
from __future__ import annotations

from pathlib import Path

from ..errors import ConfigError
from ..words import parse_word, reduce_word
from .abelian import AbelianGroup
from .base import MarkedGroup
from .cosets import DEFAULT_COSET_BOUND, CosetTableGroup, FinitePresentation, burnside_group
from .free import FreeGroup
from .freeproduct import FreeProduct
from .hnn import HnGroup
from .lamplighter import Lamplighter
from .metabelian import MetabelianizedGroup

ENGINES = ("free", "abelian", "coset-table", "burnside", "free-product", "hn", "lamplighter",
           "metabelianized")
KEYS = {"engine", "generators", "relators", "orders", "coset_bound", "exponent", "word_length",
        "hn_rank", "base", "factors"}


def parse_key_values(text: str, source: str | None = None) -> dict[str, tuple[str, int, int]]:
    """``key = value`` lines to ``{key: (value, line, value column)}``; ``#`` starts a comment."""
    out: dict[str, tuple[str, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ConfigError("expected 'key = value'", lineno, col, source)
        key, value = line.split("=", 1)
        name = key.strip()
        if not name:
            raise ConfigError("missing key before '='", lineno, line.index("=") + 1, source)
        if name in out:
            raise ConfigError(f"duplicate key {name!r}", lineno, line.index(name) + 1, source)
        vcol = len(key) + 2 + (len(value) - len(value.lstrip()))
        out[name] = (value.strip(), lineno, vcol)
    return out


def _int(kv, key, source, default=None, minimum=None):
    if key not in kv:
        if default is None:
            raise ConfigError(f"missing required key {key!r}", None, None, source)
        return default
    value, line, col = kv[key]
    try:
        n = int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}", line, col, source) from None
    if minimum is not None and n < minimum:
        raise ConfigError(f"{key} must be >= {minimum}", line, col, source)
    return n


def load_group(path: str | Path) -> MarkedGroup:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read group file: {exc.strerror}", source=str(path)) from None
    return parse_group(text, source=str(path), base_dir=path.parent)


def parse_group(text: str, source: str | None = None, base_dir: Path | None = None) -> MarkedGroup:
    kv = parse_key_values(text, source)
    for key, (_, line, _) in kv.items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", line, 1, source)
    if "engine" not in kv:
        raise ConfigError("missing required key 'engine'", None, None, source)
    engine, eline, ecol = kv["engine"]
    if engine not in ENGINES:
        raise ConfigError(f"unknown engine {engine!r} (expected one of {', '.join(ENGINES)})",
                          eline, ecol, source)
    base_dir = base_dir or Path(".")

    def generators() -> list[str]:
        if "generators" not in kv:
            raise ConfigError("missing required key 'generators'", None, None, source)
        value, line, col = kv["generators"]
        names = value.split()
        if not names:
            raise ConfigError("at least one generator required", line, col, source)
        if len(set(names)) != len(names):
            raise ConfigError("generator names must be distinct", line, col, source)
        return names

    def relators(names):
        if "relators" not in kv:
            return []
        value, line, col = kv["relators"]
        rels = []
        offset = col
        for piece in value.split(","):
            if piece.strip():
                w = reduce_word(parse_word(piece, names, source=source, line=line, column=offset - 1))
                if not w:
                    raise ConfigError("relator reduces to the empty word", line, offset, source)
                rels.append(w)
            offset += len(piece) + 1
        return rels

    if engine == "free":
        return FreeGroup(generators())
    if engine == "abelian":
        names = generators()
        value, line, col = kv.get("orders", (" ".join("0" * len(names)), None, None))
        try:
            orders = [int(x) for x in value.split()]
        except ValueError:
            raise ConfigError("orders must be integers", line, col, source) from None
        if len(orders) != len(names) or any(n < 0 for n in orders):
            raise ConfigError("need one nonnegative order per generator", line, col, source)
        return AbelianGroup(orders, names)
    if engine == "coset-table":
        names = generators()
        P = FinitePresentation(tuple(names), tuple(relators(names)))
        return CosetTableGroup(P, _int(kv, "coset_bound", source, DEFAULT_COSET_BOUND, 1))
    if engine == "burnside":
        names = generators()
        return burnside_group(len(names), _int(kv, "exponent", source, minimum=2),
                              _int(kv, "word_length", source, 2, 1),
                              _int(kv, "coset_bound", source, DEFAULT_COSET_BOUND, 1), names)
    if engine == "hn":
        return HnGroup(_int(kv, "hn_rank", source, minimum=1))
    if engine == "lamplighter":
        return Lamplighter(_int(kv, "hn_rank", source, 0, 0))
    if engine == "metabelianized":
        if "base" not in kv:
            raise ConfigError("missing required key 'base'", None, None, source)
        value, line, col = kv["base"]
        base = load_group(base_dir / value)
        if not base.is_finite:
            raise ConfigError("base group must be finite", line, col, source)
        return MetabelianizedGroup(base)
    # free-product
    if "factors" not in kv:
        raise ConfigError("missing required key 'factors'", None, None, source)
    value, line, col = kv["factors"]
    factors = [load_group(base_dir / name) for name in value.split()]
    if not factors:
        raise ConfigError("at least one factor required", line, col, source)
    names = generators() if "generators" in kv else None
    try:
        return FreeProduct(factors, names)
    except ValueError as exc:
        raise ConfigError(str(exc), line, col, source) from None

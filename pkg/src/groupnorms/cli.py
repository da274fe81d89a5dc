"""Command-line experiment runner.

    groupnorms run free-norms --ranks 2..5 --depth 60
    groupnorms run hn-limit --n 1..3 --depth 6 --format json --out reports/

Options may also come from a ``key = value`` file given with ``--config``;
command-line flags take precedence.  Reports are deterministic: no
timestamps, sorted JSON keys, ``.12g`` floats and ordered merges.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from .algebra import averaging_operator
from .cogrowth import cheeger_buser_check, cheeger_constant, cogrowth_table, grigorchuk_residual
from .criteria import (FreeBasisInstance, free_basis_certify, hn_limit_experiment,
                       infinitesimal_report, powers_average_bounds)
from .errors import (CertificationFailed, ConfigError, GroupNormsError, InvalidHomomorphism,
                     InvariantViolated, NotApplicable, ResourceExceeded)
from .groups import FreeGroup, burnside_group, cyclic_group, free_abelian, load_group
from .groups.groupfile import parse_key_values
from .spectral import fmt, free_norm_value, kesten_free_value, operator_norm_bounds

EXPERIMENTS = ("free-norms", "grigorchuk", "cheeger", "hn-limit", "powers-average",
               "basis-certify", "burnside-desk", "sequence-report")

# key -> (type, default); None default means "experiment picks"
OPTIONS = {
    "group": (str, None),
    "depth": (int, None),
    "format": (str, None),
    "out": (str, None),
    "threads": (int, 1),
    "seed": (int, 0),
    "ranks": (str, "2..5"),
    "n": (str, "1..3"),
    "mode": (str, None),
    "radius": (int, 6),
    "element": (str, None),
    "conjugators": (str, None),
    "multiplier": (str, None),
    "length": (int, 4),
    "base_elements": (str, None),
    "basis_rank": (int, 2),
    "planted": (str, "false"),
    "cogrowth_depth": (int, None),
    "spectral_depth": (int, None),
    "groups": (str, None),
    "exponent": (int, 3),
}

EXIT = {ConfigError: 2, ResourceExceeded: 3, InvariantViolated: 4, CertificationFailed: 4,
        InvalidHomomorphism: 4, NotApplicable: 5}


def parse_range(text: str, what: str) -> list[int]:
    """``2..5`` or ``1,3,4`` or ``7``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            vals = list(range(int(lo), int(hi) + 1))
        else:
            vals = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"bad {what} {text!r}; expected a..b or a list") from None
    if not vals:
        raise ConfigError(f"empty {what} {text!r}")
    return vals


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", source=path) from None
    kv = parse_key_values(text, path)
    out = {}
    for key, (value, line, col) in kv.items():
        if key == "experiment":
            out[key] = value
            continue
        if key not in OPTIONS:
            raise ConfigError(f"unknown key {key!r}", line, 1, path)
        typ = OPTIONS[key][0]
        try:
            out[key] = typ(value)
        except ValueError:
            raise ConfigError(f"{key} must be {typ.__name__}, got {value!r}", line, col, path) from None
        if key == "group" or key == "groups":
            # file references are relative to the config file
            base = Path(path).parent
            out[key] = " ".join(str(base / v) for v in value.split())
    return out


class Settings:
    def __init__(self, values: dict):
        self.v = values

    def __getattr__(self, key):
        try:
            return self.v[key]
        except KeyError:
            raise AttributeError(key) from None

    def get(self, key, default):
        val = self.v.get(key)
        return default if val is None else val


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, bytes):
        return o.decode()
    raise TypeError(f"not serialisable: {type(o).__name__}")


def _clean(o):
    """Round floats to 12 significant digits so JSON output is platform-stable."""
    if isinstance(o, float):
        return float(fmt(o))
    if isinstance(o, dict):
        return {str(k): _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def render(rows: list[list], payload, fmt_: str) -> str:
    if fmt_ == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in rows:
            w.writerow([fmt(x) if isinstance(x, float) else x for x in r])
        return buf.getvalue()
    return json.dumps(_clean(payload), sort_keys=True, indent=2, default=_json_default) + "\n"


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _group(s: Settings, default):
    return load_group(s.group) if s.get("group", None) else default()


# --- experiments -----------------------------------------------------------

def exp_free_norms(s: Settings):
    depth = s.get("depth", 60)
    ranks = parse_range(s.ranks, "ranks")
    if any(i < 1 for i in ranks):
        raise ConfigError("ranks must be >= 1")

    def one(i):
        F = FreeGroup(i)
        ax = operator_norm_bounds(averaging_operator(F), depth)
        rho = operator_norm_bounds(averaging_operator(F, symmetrized=True), depth)
        return {"rank": i, "depth": depth, "bound": ax.last_bound, "extrapolated": ax.extrapolated,
                "target": free_norm_value(i), "exponent": ax.diagnostics.get("exponent"),
                "rho_bound": rho.last_bound, "rho_extrapolated": rho.extrapolated,
                "rho_target": kesten_free_value(i)}

    res = _pmap(one, ranks, s.threads)
    cols = ["rank", "depth", "bound", "extrapolated", "target", "rho_bound", "rho_extrapolated",
            "rho_target"]
    return [cols] + [[r[c] for c in cols] for r in res], res


def exp_grigorchuk(s: Settings):
    G = _group(s, lambda: free_abelian(2))
    depth = s.get("depth", 40)
    T = cogrowth_table(G, depth)
    try:
        rep = grigorchuk_residual(G, depth, s.get("spectral_depth", 30))
    except NotApplicable as exc:
        rep = {"not_applicable": str(exc), "girth": None}
    rep = {k: v for k, v in rep.items() if k != "group"}
    rep["group"] = " ".join(G.generators)
    rep["gamma_table"] = T.gamma
    return T.csv_rows(), rep


def exp_cheeger(s: Settings):
    G = _group(s, lambda: FreeGroup(2))
    mode = s.get("mode", "literal" if G.is_finite else "ball")
    res = cheeger_constant(G, mode, radius=s.radius)
    depth = s.get("depth", 60)
    sandwich = cheeger_buser_check(G, depth, mode, radius=s.radius)
    payload = {"cheeger": res.as_json(G), "sandwich": sandwich}
    rows = [["side", "value"]] + [[k, float(sandwich[k])] for k in ("left", "middle", "right")]
    rows.append(["h", float(res.value)])
    return rows, payload


def exp_hn_limit(s: Settings):
    ns = parse_range(s.n, "n")
    if any(n < 1 for n in ns):
        raise ConfigError("n must be >= 1")
    depth = s.get("depth", 6)
    res = [r for chunk in _pmap(lambda n: hn_limit_experiment([n], depth), ns, s.threads) for r in chunk]
    rows = [["n", "k", "trace_hn", "trace_lamplighter", "strict"]]
    for r in res:
        for k, (a, b, st) in enumerate(zip(r["traces_hn"], r["traces_lamplighter"], r["strict"]), 1):
            rows.append([r["n"], k, a, b, str(st).lower()])
    return rows, res


def exp_powers_average(s: Settings):
    G = _group(s, lambda: FreeGroup(["x1", "x2"]))
    depth = s.get("depth", 60)
    g = G.element(s.get("element", G.generators[0]))
    conj_text = s.get("conjugators", None)
    if conj_text is None:
        other = G.generators[1] if G.rank > 1 else G.generators[0]
        conj_text = f"1; {other}; {other}^2"
    Y = [G.element(t.strip()) for t in conj_text.split(";")]
    u = G.element(s.multiplier) if s.get("multiplier", None) else None
    est = powers_average_bounds(G, g, Y, depth, u=u)
    payload = {"extrapolated": est.extrapolated, "bounds": est.bounds,
               "diagnostics": est.diagnostics, "conjugators": len(Y)}
    return est.csv_rows(), payload


def exp_basis_certify(s: Settings):
    base = _group(s, lambda: cyclic_group(3, "a"))
    if not base.is_finite:
        raise ConfigError("basis-certify needs a finite base group")
    A_text = s.get("base_elements", base.generators[0])
    A = [base.element(t.strip()) for t in A_text.split(";")]
    inst = FreeBasisInstance(base, A, s.basis_rank)
    target = inst.planted() if s.planted.lower() in ("1", "true", "yes") else inst
    L = s.length
    try:
        rep = free_basis_certify(target, L, seed=s.seed)
    except CertificationFailed as exc:
        payload = {"certified": False, "reason": str(exc), "witnesses": exc.witnesses}
        text = render([["certified", "witness"], ["false", exc.witness]], payload, s.format)
        raise _Reported(text, exc) from None
    payload = rep.as_json()
    payload.update(T=[" ".join(f"{k}:{inst.group.factors[k].encode(g).decode()}" for k, g in t)
                      for t in inst.T], T_size=len(inst.T))
    rows = [["length", "words"]] + [[i + 1, c] for i, c in enumerate(rep.per_length)]
    return rows, payload


def exp_burnside_desk(s: Settings):
    G = burnside_group(2, s.exponent) if not s.get("group", None) else load_group(s.group)
    depth = s.get("depth", 8)
    T = cogrowth_table(G, depth)
    rep = grigorchuk_residual(G, depth)
    sandwich = cheeger_buser_check(G, mode="literal")
    payload = {
        "order": G.order(),
        "relators": len(G.relators() or []),
        "law_checked": getattr(G, "law", None) is not None,
        "girth": T.girth,
        "gamma": T.gamma,
        "omega_exact": rep.get("omega"),
        "grigorchuk_residual": rep["residual"],
        "sandwich": sandwich,
    }
    return T.csv_rows(), payload


def exp_sequence_report(s: Settings):
    depth = s.get("depth", 40)
    if s.get("groups", None):
        S = [(i, load_group(p)) for i, p in enumerate(s.groups.split(), start=1)]
    else:
        S = [(i, FreeGroup(i)) for i in parse_range(s.ranks, "ranks")]
    rep = infinitesimal_report(S, depth, cogrowth_depth=s.get("cogrowth_depth", 10),
                               cheeger_radius=min(s.radius, 4))
    cols = ["i", "ax_bound", "rho_bound", "cheeger_ratio", "omega_ratio", "girth"]
    rows = [cols] + [["" if r.get(c) is None else r[c] for c in cols] for r in rep.rows]
    return rows, {"rows": rep.rows, "trend": rep.trend}


RUNNERS = {
    "free-norms": exp_free_norms, "grigorchuk": exp_grigorchuk, "cheeger": exp_cheeger,
    "hn-limit": exp_hn_limit, "powers-average": exp_powers_average,
    "basis-certify": exp_basis_certify, "burnside-desk": exp_burnside_desk,
    "sequence-report": exp_sequence_report,
}


class _Reported(Exception):
    def __init__(self, text, cause):
        super().__init__(str(cause))
        self.text = text
        self.cause = cause


def run_experiment(name: str, values: dict) -> str:
    """Run one experiment and return the rendered report text."""
    if name not in RUNNERS:
        raise ConfigError(f"unknown experiment {name!r} (expected one of {', '.join(EXPERIMENTS)})")
    s = Settings({k: values.get(k, d) for k, (_, d) in OPTIONS.items()})
    s.v["format"] = s.get("format", "csv")
    if s.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {s.format!r}")
    if s.get("depth", None) is not None and s.depth < 1:
        raise ConfigError("depth must be >= 1")
    if s.threads < 1:
        raise ConfigError("threads must be >= 1")
    rows, payload = RUNNERS[name](s)
    return render(rows, payload, s.format)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="groupnorms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run an experiment")
    r.add_argument("experiment", nargs="?", help=" | ".join(EXPERIMENTS))
    r.add_argument("--config", help="key = value options file")
    for key, (typ, _) in OPTIONS.items():
        r.add_argument("--" + key.replace("_", "-"), dest=key, type=typ, default=None)
    sub.add_parser("list", help="list experiments")
    return p


def _write(text: str, out: str | None, name: str, fmt_: str) -> None:
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{name}.{fmt_}").write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        print("\n".join(EXPERIMENTS))
        return 0
    values: dict = {}
    name = args.experiment
    try:
        if args.config:
            values.update(load_config(args.config))
            name = name or values.pop("experiment", None)
            values.pop("experiment", None)
        values.update({k: v for k, v in vars(args).items() if k in OPTIONS and v is not None})
        if not name:
            raise ConfigError("no experiment given")
        fmt_ = values.get("format") or "csv"
        try:
            text = run_experiment(name, values)
        except _Reported as rep:
            _write(rep.text, values.get("out"), name, fmt_)
            raise rep.cause from None
        _write(text, values.get("out"), name, fmt_)
        return 0
    except GroupNormsError as exc:
        code = next((c for t, c in EXIT.items() if isinstance(exc, t)), 1)
        label = getattr(exc, "invariant", None) or type(exc).__name__
        print(f"error [{label}]: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    raise SystemExit(main())

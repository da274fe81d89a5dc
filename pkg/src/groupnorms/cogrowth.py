"""Cogrowth tables, girth, the Grigorchuk formula and Cheeger constants."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import InvariantViolated, NotApplicable, ResourceExceeded
from .groups.base import MarkedGroup, sphere_bfs
from .spectral import fmt, spectral_radius_bounds

DEFAULT_STATE_CAP = 5 * 10**6


@dataclass
class CogrowthTable:
    """gamma(k) = number of reduced words of length <= k trivial in G, k = 0..depth."""

    group: MarkedGroup
    gamma: list[int]
    words_checked: list[int] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.gamma) - 1

    @property
    def girth(self) -> int | None:
        for k, g in enumerate(self.gamma):
            if k and g >= 2:
                return k
        return None

    @property
    def omega_root(self) -> float:
        """gamma(depth)^(1/depth); an underestimate of the cogrowth rate."""
        return self.gamma[-1] ** (1.0 / self.depth) if self.depth else 1.0

    def rate(self, k: int) -> float:
        return self.gamma[k] ** (1.0 / k) if k else 1.0

    @property
    def omega_hat(self) -> float:
        """Tail fit of log gamma(k) = k log w + beta log k + c (last third of the depths)."""
        if self.group.is_finite:
            return float(self.omega_exact)
        if self.girth is None:
            return 1.0
        start = self.girth
        logs = [math.log(g) for g in self.gamma[start:]]
        if len(logs) < 3:
            return self.omega_root
        w, _ = _fit_rate(logs, start)
        return max(w, self.omega_root)

    @property
    def omega_exact(self) -> Fraction | None:
        """Exact cogrowth rate when the engine is finite: 2|X| - 1."""
        if self.group.is_finite:
            return Fraction(2 * self.group.rank - 1)
        return None

    def csv_rows(self) -> list[list[str]]:
        rows = [["k", "gamma", "gamma_rate"]]
        for k, g in enumerate(self.gamma):
            rows.append([str(k), str(g), fmt(self.rate(k))])
        return rows


def _fit_rate(logs: list[float], start: int) -> tuple[float, dict]:
    import numpy as np
    N = len(logs)
    lo = N - max(3, N // 3)
    k = np.arange(start + lo, start + N, dtype=float)
    y = np.array(logs[lo:])
    A = np.vstack([k, np.log(k), np.ones_like(k)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return math.exp(coef[0]), {"exponent": float(coef[1])}


def cogrowth_table(G: MarkedGroup, n: int, cap: int = DEFAULT_STATE_CAP) -> CogrowthTable:
    """Exact gamma(0..n) by dynamic programming over (element, last letter).

    States whose distance lower bound exceeds the remaining budget are
    dropped; dropped words are still accounted for in the conservation
    check (total words per length = 2m(2m-1)^(k-1)).
    """
    if n < 0:
        raise ValueError("depth must be >= 0")
    m2 = 2 * G.rank
    ident = G.identity
    lower = G.distance_lower_bound
    states: dict = {(ident, -1): 1}
    gamma = [1]
    checked = [1]
    dropped = 0
    for k in range(1, n + 1):
        nxt: dict = defaultdict(int)
        budget = n - k
        for (g, last), cnt in states.items():
            for c in range(m2):
                if last >= 0 and c == last ^ 1:
                    continue
                nxt[(G.mul_letter(g, c), c)] += cnt
        generated = sum(nxt.values())
        dropped *= (m2 - 1)
        expected = m2 * (m2 - 1) ** (k - 1)
        if generated + dropped != expected:
            raise InvariantViolated("reduced-word conservation", f"length {k}")
        kept = {}
        for key, cnt in nxt.items():
            if lower(key[0]) > budget:
                dropped += cnt
            else:
                kept[key] = cnt
        if len(kept) > cap:
            raise ResourceExceeded(f"cogrowth DP exceeded {cap} states at length {k}")
        hits = sum(cnt for (g, _), cnt in kept.items() if g == ident)
        gamma.append(gamma[-1] + hits)
        checked.append(generated)
        states = kept
    return CogrowthTable(G, gamma, checked)


def girth(G: MarkedGroup, cap: int, state_cap: int = DEFAULT_STATE_CAP) -> int | None:
    """Length of the shortest nontrivial reduced word trivial in G, or None if > cap."""
    # the table for depth `cap` prunes against `cap`, so grow the depth instead
    for k in range(1, cap + 1):
        table = cogrowth_table(G, k, state_cap)
        if table.gamma[k] >= 2:
            return k
    return None


def grigorchuk_rhs(m: int, omega):
    """(2m-1)/(2m w) + w/(2m); exact when w is a Fraction."""
    if isinstance(omega, Fraction):
        return Fraction(2 * m - 1, 2 * m) / omega + omega / (2 * m)
    return (2 * m - 1) / (2 * m * omega) + omega / (2 * m)


def omega_from_rho(m: int, rho: float) -> float:
    """Invert the Grigorchuk formula on the branch w >= sqrt(2m-1)."""
    disc = max(0.0, (m * rho) ** 2 - (2 * m - 1))
    return m * rho + math.sqrt(disc)


def grigorchuk_residual(G: MarkedGroup, depth: int, spectral_depth: int = 30) -> dict:
    """Compare rho-hat with the Grigorchuk right-hand side at omega-hat.

    Finite engines have rho = 1 and omega = 2|X| - 1 exactly, and the
    residual is computed in exact arithmetic.  Otherwise everything is a
    finite-depth estimate and the residual is only reported.
    """
    table = cogrowth_table(G, depth)
    if table.girth is None:
        raise NotApplicable("kernel looks trivial up to this depth (free marking); "
                            "the formula needs N != {1}")
    m = G.rank
    report = {
        "group": repr(G),
        "depth": depth,
        "girth": table.girth,
        "gamma": table.gamma[-1],
        "omega_root": table.omega_root,
        "omega_hat": table.omega_hat,
    }
    if G.is_finite:
        omega = table.omega_exact
        rho = Fraction(1)
        rhs = grigorchuk_rhs(m, omega)
        report.update(mode="exact", rho=rho, omega=omega, rhs=rhs, residual=rho - rhs)
    else:
        est = spectral_radius_bounds(G, spectral_depth)
        rho = est.extrapolated
        rhs = grigorchuk_rhs(m, report["omega_hat"])
        report.update(mode="estimate", rho=rho, rho_lower=est.last_bound, omega=report["omega_hat"],
                      rhs=rhs, residual=rho - rhs, omega_from_rho=omega_from_rho(m, rho))
    return report


# --- Cheeger constants ------------------------------------------------------

@dataclass
class CheegerResult:
    mode: str
    value: object
    witness: list
    details: dict = field(default_factory=dict)

    def as_json(self, G: MarkedGroup) -> dict:
        v = self.value
        return {
            "mode": self.mode,
            "value": str(v) if isinstance(v, Fraction) else v,
            "value_float": float(v),
            "witness": [G.encode(g).decode() for g in self.witness],
            "witness_size": len(self.witness),
            **self.details,
        }


def boundary_size(G: MarkedGroup, F: set) -> int:
    """|dF| in the 2|X|-regular Cayley multigraph: half-edges leaving F."""
    out = 0
    for g in F:
        for c in range(2 * G.rank):
            if G.mul_letter(g, c) not in F:
                out += 1
    return out


def cheeger_constant(G: MarkedGroup, mode: str = "balanced", size_cap: int = 10**6,
                     radius: int = 6) -> CheegerResult:
    """Cheeger constant h(G, X) in one of three labelled modes.

    ``literal``: the infimum over all finite subsets; for a finite
    group F = G gives 0.  ``balanced``: minimum over subsets with
    |F| <= |G|/2, by exhaustive search over subsets containing the
    identity (left translations preserve the ratio).  ``ball``: the
    minimum of |dB_r|/|B_r| over radii up to ``radius``, an upper bound.
    """
    if mode == "literal":
        if not G.is_finite:
            raise NotApplicable("literal mode needs a finite engine")
        elems = G.elements()
        return CheegerResult("literal-exact-finite", Fraction(boundary_size(G, set(elems)), len(elems)),
                             elems)
    if mode == "balanced":
        if not G.is_finite:
            raise NotApplicable("balanced mode needs a finite engine")
        elems = G.elements()
        ident = G.identity
        others = [g for g in elems if g != ident]
        best = None
        witness = None
        examined = 0
        for size in range(1, len(elems) // 2 + 1):
            for rest in combinations(others, size - 1):
                examined += 1
                if examined > size_cap:
                    raise ResourceExceeded(f"subset search exceeded {size_cap} subsets")
                F = {ident, *rest}
                ratio = Fraction(boundary_size(G, F), size)
                if best is None or ratio < best:
                    best, witness = ratio, [ident, *rest]
        if best is None:
            # trivial group: no nonempty subset of size <= |G|/2
            raise NotApplicable("group too small for balanced mode")
        return CheegerResult("balanced-finite", best, witness, {"subsets_examined": examined})
    if mode == "ball":
        spheres = sphere_bfs(G, radius)
        ball: set = set()
        ratios = []
        best = None
        witness_r = 0
        for r, sphere in enumerate(spheres):
            ball.update(sphere)
            ratio = Fraction(boundary_size(G, ball), len(ball))
            ratios.append(ratio)
            if r and (best is None or ratio < best):
                best, witness_r = ratio, r
        if best is None:
            best, witness_r = ratios[0], 0
        ball_r = [g for s in spheres[: witness_r + 1] for g in s]
        return CheegerResult("ball-upper-infinite", best, ball_r,
                             {"radius": witness_r,
                              "ratios": [str(x) for x in ratios],
                              "ball_sizes": [sum(len(s) for s in spheres[: r + 1]) for r in range(len(spheres))]})
    raise ValueError(f"unknown Cheeger mode {mode!r}")


def cheeger_buser_check(G: MarkedGroup, depth: int = 60, mode: str = "literal",
                        radius: int = 6) -> dict:
    """Evaluate the three sides of the discrete Cheeger-Buser sandwich.

    The sandwich is asserted (InvariantViolated on failure) only in the exact
    finite literal mode, where rho = 1 and h = 0.  Otherwise both sides are
    estimates and the report states the gaps.
    """
    m2 = 2 * G.rank
    if mode == "literal" and G.is_finite:
        h = cheeger_constant(G, "literal").value
        rho = Fraction(1)
        left = m2 * (1 - rho) / (m2 - 1)
        mid = h / m2
        right = Fraction(0) if rho == 1 else math.sqrt(1 - rho * rho)
        if not (left <= mid <= right):
            raise InvariantViolated("Cheeger-Buser sandwich", f"{left} <= {mid} <= {right}")
        return {"mode": "literal-exact-finite", "rho": rho, "h": h, "left": left, "middle": mid,
                "right": right, "asserted": True}
    res = cheeger_constant(G, mode, radius=radius)
    est = spectral_radius_bounds(G, depth)
    rho = min(est.extrapolated, 1.0)
    h = float(res.value)
    left = m2 * (1 - rho) / (m2 - 1)
    mid = h / m2
    right = math.sqrt(max(0.0, 1 - rho * rho))
    return {
        "mode": res.mode, "rho": rho, "rho_lower": est.last_bound, "h": h,
        "h_direction": "upper" if res.mode == "ball-upper-infinite" else "exact-balanced",
        "left": left, "middle": mid, "right": right,
        "left_gap": mid - left, "right_gap": right - mid, "asserted": False,
    }

"""Lower bounds and extrapolated values for operator norms and spectral radii.

bound_n = tau((a*a)^n)^(1/2n) increases to ||lambda(a)||.  The extrapolated
value comes from a least-squares fit of

    log tau_n = 2n log L + beta log n + c

over the last third of the computed depths; L is reported together with
the fitted exponent beta and the fit residual.  Raw bounds are always kept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import AlgebraElement, TracePowerSequence, averaging_operator, power_trace_sequence
from .errors import InvariantViolated, ResourceExceeded
from .groups.base import MarkedGroup


@dataclass
class SpectralEstimate:
    bounds: list[float]
    extrapolated: float
    diagnostics: dict = field(default_factory=dict)
    sequence: TracePowerSequence | None = None

    @property
    def depth(self) -> int:
        return len(self.bounds)

    @property
    def last_bound(self) -> float:
        return self.bounds[-1]

    def csv_rows(self) -> list[list[str]]:
        """Rows ``n, trace_numerator, trace_denominator, bound, extrapolated``."""
        rows = [["n", "trace_numerator", "trace_denominator", "bound", "extrapolated"]]
        for n, (t, b) in enumerate(zip(self.sequence.traces, self.bounds), start=1):
            rows.append([str(n), str(t.numerator), str(t.denominator), fmt(b), fmt(self.extrapolated)])
        return rows


def fmt(x: float) -> str:
    return format(x, ".12g")


def extrapolate(log_traces: list[float], fixed_exponent: float | None = None) -> tuple[float, dict]:
    """Fit the tail model and return (L, diagnostics).

    With ``fixed_exponent`` the power-law exponent is held fixed instead of
    fitted.  Needs at least three points in the window.
    """
    N = len(log_traces)
    lo = max(1, N - N // 3)
    if N - lo + 1 < 3:
        lo = max(1, N - 2)
    n = np.arange(lo, N + 1, dtype=float)
    y = np.array(log_traces[lo - 1:], dtype=float)
    if len(n) < 3:
        L = math.exp(y[-1] / (2 * n[-1]))
        return L, {"window": [int(n[0]), int(n[-1])], "model": "root", "exponent": None, "rms": 0.0}
    if fixed_exponent is None:
        A = np.vstack([2 * n, np.log(n), np.ones_like(n)]).T
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        beta = float(coef[1])
    else:
        A = np.vstack([2 * n, np.ones_like(n)]).T
        coef, *_ = np.linalg.lstsq(A, y - fixed_exponent * np.log(n), rcond=None)
        beta = fixed_exponent
    resid = A @ coef - (y if fixed_exponent is None else y - fixed_exponent * np.log(n))
    return math.exp(coef[0]), {
        "window": [int(n[0]), int(n[-1])],
        "model": "L^(2n) n^beta",
        "exponent": beta,
        "rms": float(np.sqrt(np.mean(resid ** 2))),
        "fit": math.exp(coef[0]),
    }


def estimate_from_sequence(seq: TracePowerSequence) -> SpectralEstimate:
    bounds = seq.bounds
    logs = [seq.log_trace(n) for n in range(1, seq.depth + 1)]
    L, diag = extrapolate(logs)
    diag["method"] = seq.method
    diag["depth"] = seq.depth
    # the last bound is certified, so never report less
    extrapolated = max(L, bounds[-1])
    return SpectralEstimate(bounds, extrapolated, diag, seq)


def operator_norm_bounds(a: AlgebraElement, N: int, method: str = "auto",
                         cap: int | None = None) -> SpectralEstimate:
    """Certified lower bounds tau((a*a)^n)^(1/2n), n <= N, and an extrapolated norm."""
    if not a:
        raise ValueError("operator_norm_bounds needs a nonzero element")
    kwargs = {} if cap is None else {"cap": cap}
    return estimate_from_sequence(power_trace_sequence(a, N, method, **kwargs))


def spectral_radius_bounds(G: MarkedGroup, N: int, method: str = "auto",
                           cap: int | None = None) -> SpectralEstimate:
    """rho(G, X) = ||A_{X^+-1}||; bound_n is the 2n-step return probability to the power 1/2n."""
    return operator_norm_bounds(averaging_operator(G, symmetrized=True), N, method, cap)


def free_tree_return_oracle(m: int, N: int) -> list[Fraction]:
    """Exact p_{2n}, n = 1..N, for the simple random walk on the 2m-regular tree.

    Radial birth-death dynamic program on the distance from the root: from
    distance d >= 1 one of 2m steps goes down and 2m-1 go up, from the root
    all 2m go up.  Integer path counts, divided by (2m)^(2n) at the end.
    """
    if m < 1:
        raise ValueError("rank must be >= 1")
    q = 2 * m
    counts = [1]
    out = []
    for step in range(1, 2 * N + 1):
        nxt = [0] * (len(counts) + 1)
        for d, c in enumerate(counts):
            if not c:
                continue
            if d == 0:
                nxt[1] += q * c
            else:
                nxt[d - 1] += c
                nxt[d + 1] += (q - 1) * c
        counts = nxt
        if step % 2 == 0:
            out.append(Fraction(counts[0], q ** step))
    return out


def free_walk_convolution_traces(m: int, N: int, cap: int = 10**8) -> list[Fraction]:
    """tau(M^{2n}), n <= N, in F_m by element-level convolution c -> c * M.

    Walk counts are kept per group element in numpy arrays.  Reduced words
    of length L beginning with a fixed letter are indexed in base 2m-1
    (digit = position of the next letter among the 2m-1 allowed ones), so
    the right neighbours of word i are the children 5i+c one layer up (for
    m = 3) and its parent i // 5 one layer down.  M is invariant under
    permuting the letters, so only words beginning with the first letter
    are stored; the others contribute the same counts.
    """
    if m < 1 or N < 1:
        raise ValueError("need m >= 1 and N >= 1")
    q, k = 2 * m, 2 * m - 1
    if q ** N >= 2 ** 32:
        raise ResourceExceeded("walk counts would exceed 32 bits")
    if N > 1 and k ** (N - 1) > cap:
        raise ResourceExceeded(f"element arrays would exceed {cap} entries")
    root = 1
    layers: list[np.ndarray] = []  # layers[L-1]: words of length L starting with letter 0
    out = []
    for n in range(1, N + 1):
        new_layers = []
        for L in range(1, n + 1):
            up = layers[L].reshape(-1, k).sum(axis=1) if L < len(layers) else 0
            if L == 1:
                down = root
            elif L - 2 < len(layers):
                down = np.repeat(layers[L - 2], k)
            else:
                down = 0
            size = k ** (L - 1)
            new_layers.append(np.zeros(size, dtype=np.int64) + up + down)
        root = q * int(layers[0][0]) if layers else 0
        layers = new_layers
        total = root * root + q * sum(_sum_squares(a) for a in layers)
        out.append(Fraction(total, q ** (2 * n)))
    return out


def _sum_squares(a: np.ndarray) -> int:
    """Exact sum of squares of nonnegative values below 2^32."""
    hi, lo = a >> 16, a & 0xFFFF
    return (int(np.sum(hi * hi)) << 32) + (int(np.sum(hi * lo)) << 17) + int(np.sum(lo * lo))


def check_oracle_agreement(m: int, N: int, method: str = "auto") -> list[Fraction]:
    """Exact equality of tau(M^{2n}) in F_m with the radial oracle; returns the common traces."""
    from .groups.free import FreeGroup
    seq = power_trace_sequence(averaging_operator(FreeGroup(m), True), N, method)
    oracle = free_tree_return_oracle(m, N)
    for n, (t, p) in enumerate(zip(seq.traces, oracle), start=1):
        if t != p:
            raise InvariantViolated("oracle agreement", f"F_{m}, n={n}: {t} != {p}")
    return oracle


def kesten_free_value(m: int) -> float:
    """rho(F_m) = sqrt(2m-1)/m."""
    return math.sqrt(2 * m - 1) / m


def free_norm_value(i: int) -> float:
    """(1/i)||x_1 + ... + x_i|| = 2 sqrt(i-1)/i in F_i."""
    return 2 * math.sqrt(i - 1) / i

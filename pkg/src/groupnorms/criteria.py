"""Sequence-level checks built on the spectral and cogrowth layers.

Everything asserted here is an exact, finitely checkable statement:
trace identities, termwise trace inequalities, normal-form certificates.
Limits (norms tending to 0, malnormality) are only estimated or sampled.
"""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import (AlgebraElement, averaging_operator, one, power_trace_sequence)
from .cogrowth import cheeger_constant, cogrowth_table
from .errors import (CertificationFailed, GroupNormsError, InvalidHomomorphism,
                     InvariantViolated, NotApplicable)
from .groups import (FreeGroup, FreeProduct, HnGroup, Lamplighter, MarkedGroup,
                     conjugate, conjugation_certificates, cyclic_group, evaluate_word, has_pinch)
from .spectral import SpectralEstimate, estimate_from_sequence, operator_norm_bounds
from .words import Word, format_word, reduce_word

# --- homomorphisms ---------------------------------------------------------


class Homomorphism:
    """Generator images defining eps: source -> target.

    ``check()`` evaluates every known relator of the source on the images.
    """

    def __init__(self, source: MarkedGroup, target: MarkedGroup, images: Sequence):
        if len(images) != source.rank:
            raise ValueError(f"need {source.rank} images, got {len(images)}")
        self.source = source
        self.target = target
        self.images = list(images)
        self._letter_images = []
        for x in self.images:
            self._letter_images += [x, target.inv(x)]
        self._cache: dict = {}

    def apply_word(self, w: Word):
        T = self.target
        g = T.identity
        for c in w:
            g = T.mul(g, self._letter_images[c])
        return g

    def __call__(self, g):
        if g not in self._cache:
            self._cache[g] = self.apply_word(self.source.word_of(g))
        return self._cache[g]

    def check(self) -> int:
        """Number of relators verified; InvalidHomomorphism on the first failure."""
        rels = self.source.relators()
        if rels is None:
            raise NotApplicable(f"{self.source!r} has no relator list to verify against")
        for r in rels:
            if not self.target.is_identity(self.apply_word(r)):
                raise InvalidHomomorphism(
                    f"relator {format_word(r, self.source.generators)} does not map to the identity")
        return len(rels)

    def push(self, a: AlgebraElement) -> AlgebraElement:
        out: dict = defaultdict(Fraction)
        for g, c in a.coeffs.items():
            out[self(g)] += c
        return AlgebraElement(self.target, out)


# --- termwise trace inequalities --------------------------------------------


@dataclass
class MonotonicityReport:
    passed: bool
    depth: int
    lower: list[Fraction]
    upper: list[Fraction]
    witness: int | None = None
    relators_checked: int | None = None

    @property
    def strict(self) -> list[bool]:
        return [u > l for l, u in zip(self.lower, self.upper)]

    @property
    def equal(self) -> list[bool]:
        return [u == l for l, u in zip(self.lower, self.upper)]


def _compare(lower, upper, depth, assert_, label) -> MonotonicityReport:
    witness = None
    for n, (l, u) in enumerate(zip(lower, upper), start=1):
        if u < l:
            witness = n
            break
    rep = MonotonicityReport(witness is None, depth, lower, upper, witness)
    if assert_ and witness is not None:
        raise InvariantViolated(label, f"fails at n={witness}: {upper[witness - 1]} < {lower[witness - 1]}")
    return rep


def trace_monotonicity_check(a: AlgebraElement, eps: Homomorphism, depth: int,
                             method: str = "auto", assert_: bool = True) -> MonotonicityReport:
    """tau_Q((eps(a)*eps(a))^n) >= tau_G((a*a)^n) for n <= depth, exactly."""
    if not a.is_nonnegative():
        raise ValueError("a must have nonnegative coefficients")
    if a.group is not eps.source:
        raise ValueError("a must live over the homomorphism's source")
    checked = eps.check()
    src = power_trace_sequence(a, depth, method).traces
    tgt = power_trace_sequence(eps.push(a), depth, method).traces
    rep = _compare(src, tgt, depth, assert_, "trace monotonicity under a homomorphism")
    rep.relators_checked = checked
    return rep


def domination_check(a: AlgebraElement, b: AlgebraElement, depth: int, method: str = "auto",
                     assert_: bool = True) -> MonotonicityReport:
    """tau((b*b)^n) >= tau((a*a)^n) when 0 <= a <= b coefficientwise."""
    if not a.is_nonnegative():
        raise ValueError("a must have nonnegative coefficients")
    if not (b - a).is_nonnegative():
        raise ValueError("need 0 <= a <= b coefficientwise")
    lo = power_trace_sequence(a, depth, method).traces
    hi = power_trace_sequence(b, depth, method).traces
    return _compare(lo, hi, depth, assert_, "trace monotonicity under coefficient domination")


# --- rebalancing F_k -> F_l -------------------------------------------------


@dataclass
class Rebalance:
    k: int
    l: int
    q: int
    r: int
    hom: Homomorphism
    image: AlgebraElement


def rebalance_homomorphism(k: int, l: int) -> Rebalance:
    """x_i -> y_(residue of i mod l) for i <= lq, x_i -> 1 beyond, with k = lq + r.

    Asserts eps(x_1 + ... + x_k) = q (y_1 + ... + y_l) + r exactly.
    """
    if not (k >= l >= 1):
        raise ValueError("need k >= l >= 1")
    q, r = divmod(k, l)
    Fk = FreeGroup([f"x{i}" for i in range(1, k + 1)])
    Fl = FreeGroup([f"y{j}" for j in range(1, l + 1)])
    images = [Fl.generator(i % l) if i < l * q else Fl.identity for i in range(k)]
    hom = Homomorphism(Fk, Fl, images)
    hom.check()
    image = hom.push(AlgebraElement(Fk, {Fk.generator(i): 1 for i in range(k)}))
    expected = AlgebraElement(Fl, {Fl.generator(j): q for j in range(l)}) + r * one(Fl)
    if image != expected:
        raise InvariantViolated("rebalancing image identity", f"k={k}, l={l}: {image!r}")
    return Rebalance(k, l, q, r, hom, image)


# --- Powers averaging ---------------------------------------------------------


def _free_rank_of_span(words: list[Word]) -> int:
    """Rank of the subgroup of a free group spanned by ``words`` (Stallings folding)."""
    parent: list[int] = [0]

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def new():
        parent.append(len(parent))
        return len(parent) - 1

    raw = []
    for w in words:
        v = 0
        for i, c in enumerate(w):
            u = 0 if i == len(w) - 1 else new()
            raw.append((v, c, u))
            v = u
    out: dict = defaultdict(set)
    for v, c, u in raw:
        out[v].add((c, u))
        out[u].add((c ^ 1, v))
    # fold: merge vertices joined to a common vertex by the same label
    changed = True
    while changed:
        changed = False
        seen: dict = {}
        for v in list(out):
            rv = find(v)
            for c, u in out[v]:
                ru = find(u)
                key = (rv, c)
                if key in seen and seen[key] != ru:
                    a, b = find(seen[key]), ru
                    if a != b:
                        parent[max(a, b)] = min(a, b)
                        changed = True
                    seen[key] = find(a)
                else:
                    seen[key] = ru
    verts = {find(v) for v in out} | {0}
    labelled = {(find(v), c, find(u)) for v in out for c, u in out[v] if c % 2 == 0}
    return len(labelled) - len(verts) + 1


def is_free_basis(words: list[Word]) -> bool:
    """Nontrivial, distinct reduced words that freely generate the subgroup they span."""
    if any(not w for w in words) or len(set(words)) != len(words):
        return False
    return _free_rank_of_span(words) == len(words)


def powers_average_bounds(G: MarkedGroup, g, Y: Sequence, depth: int, u=None,
                          identity_depth: int = 4, method: str = "auto") -> SpectralEstimate:
    """Trace-power bounds for (1/|Y|) sum_y lambda(u y g y^-1).

    The traces of the conjugate sum s, of the commutator sum s g^-1 and (if
    given) of u s are asserted equal exactly up to ``identity_depth``.  In a
    free group whose distinct conjugates form a free basis, the estimate is
    computed inside that free subgroup, after checking exact agreement with
    the ambient computation.
    """
    if G.is_identity(g):
        raise ValueError("g must be nontrivial")
    if not Y:
        raise ValueError("Y must be nonempty")
    w = Fraction(1, len(Y))
    acc: dict = defaultdict(Fraction)
    for y in Y:
        acc[conjugate(G, y, g)] += w
    s = AlgebraElement(G, acc)
    ginv = G.inv(g)
    forms = {"commutator": AlgebraElement(G, {G.mul(h, ginv): c for h, c in s.coeffs.items()})}
    if u is not None:
        forms["multiplied"] = AlgebraElement(G, {G.mul(u, h): c for h, c in s.coeffs.items()})
    cd = min(depth, identity_depth)
    ref = power_trace_sequence(s, cd, "convolution").traces
    for name, e in forms.items():
        other = power_trace_sequence(e, cd, "convolution").traces
        if other != ref:
            n = next(i for i, (x, y) in enumerate(zip(ref, other), 1) if x != y)
            raise InvariantViolated("conjugate-sum trace identity", f"{name} form differs at n={n}")
    restriction = "none"
    est = None
    if isinstance(G, FreeGroup):
        basis = sorted(s.coeffs)
        if is_free_basis(basis):
            Fk = FreeGroup(len(basis))
            sub = AlgebraElement(Fk, {Fk.generator(j): s[b] for j, b in enumerate(basis)})
            seq = power_trace_sequence(sub, depth, "tree")
            if seq.traces[:cd] != ref:
                raise InvariantViolated("subgroup restriction agreement")
            est = estimate_from_sequence(seq)
            restriction = f"free-basis-rank-{len(basis)}"
    if est is None:
        est = operator_norm_bounds(s, depth, method)
    est.diagnostics.update(identity_depth=cd, restriction=restriction,
                           identity_forms=["conjugate", *forms])
    return est


# --- sequence report ---------------------------------------------------------


@dataclass
class SequenceReport:
    rows: list[dict]
    trend: dict

    def to_json(self) -> list[dict]:
        return self.rows


def _r(x):
    return None if x is None else float(format(x, ".12g"))


def infinitesimal_report(S: Sequence[tuple[int, MarkedGroup]], depth: int,
                         cogrowth_depth: int = 12, cheeger_radius: int = 4,
                         subset_cap: int = 2 * 10**5) -> SequenceReport:
    """Per-index norm, spectral radius, Cheeger ratio, cogrowth ratio and girth.

    Errors for one index are recorded in its row and do not stop the rest.
    """
    idx = [i for i, _ in S]
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("indices must be strictly increasing")
    rows = []
    for i, G in S:
        m = G.rank
        row = {"i": i, "rank": m, "ax_bound": None, "rho_bound": None, "cheeger_ratio": None,
               "omega_ratio": None, "girth": None, "mode_flags": {}}
        flags = row["mode_flags"]
        errors = {}
        try:
            ax = operator_norm_bounds(averaging_operator(G), depth)
            row["ax_bound"] = _r(ax.last_bound)
            row["ax_extrapolated"] = _r(ax.extrapolated)
            flags["ax"] = "lower-bound"
        except GroupNormsError as e:
            errors["ax"] = str(e)
        try:
            rho = operator_norm_bounds(averaging_operator(G, symmetrized=True), depth)
            row["rho_bound"] = _r(rho.last_bound)
            row["rho_extrapolated"] = _r(rho.extrapolated)
            flags["rho"] = "lower-bound"
        except GroupNormsError as e:
            errors["rho"] = str(e)
        try:
            if G.is_finite:
                h = cheeger_constant(G, "balanced", size_cap=subset_cap)
                flags["cheeger"] = "exact-balanced"
            else:
                h = cheeger_constant(G, "ball", radius=cheeger_radius)
                flags["cheeger"] = "upper-bound"
            row["cheeger_ratio"] = _r(float(h.value) / (2 * m))
        except GroupNormsError as e:
            errors["cheeger"] = str(e)
        try:
            T = cogrowth_table(G, cogrowth_depth)
            row["girth"] = T.girth
            if T.girth is None:
                flags["girth"] = f"exceeds-{cogrowth_depth}"
                flags["omega"] = "trivial-kernel-up-to-depth"
                row["omega_ratio"] = _r(1.0 / m)
            else:
                flags["girth"] = "exact"
                flags["omega"] = "exact" if G.is_finite else "report-only"
                row["omega_ratio"] = _r(T.omega_hat / m)
        except GroupNormsError as e:
            errors["cogrowth"] = str(e)
        if errors:
            row["errors"] = errors
        rows.append(row)
    return SequenceReport(rows, _trend(rows))


def _trend(rows: list[dict]) -> dict:
    def series(key):
        return [r.get(key) for r in rows if r.get(key) is not None]

    ax = series("ax_extrapolated")
    rho = series("rho_extrapolated")
    h = series("cheeger_ratio")
    om = series("omega_ratio")
    dec = lambda v: len(v) >= 2 and all(b < a for a, b in zip(v, v[1:]))  # noqa: E731
    inc = lambda v: len(v) >= 2 and all(b > a for a, b in zip(v, v[1:]))  # noqa: E731
    amenable_like = bool(rho) and min(rho) > 0.99
    return {
        "ax_decreasing": dec(ax),
        "rho_decreasing": dec(rho),
        "omega_ratio_decreasing": dec(om),
        "cheeger_ratio_increasing": inc(h),
        "verdict": ("consistent-with-infinitesimal" if dec(ax) and dec(rho) and not amenable_like
                    else "not infinitesimal"),
        "certified": False,
    }


# --- free basis certification --------------------------------------------------


@dataclass
class GeneratorFamily:
    """Elements of a free product to be certified as a free basis.

    ``cores[j]`` lists syllable positions of element j that must survive in
    every reduced product (positions in the element's own normal form).
    """

    group: FreeProduct
    elements: list
    names: list[str]
    cores: list[tuple[int, ...]] | None = None


@dataclass
class FreeBasisInstance:
    """T = {t_(a,i) = y_a x_i a x_i^-1 z_a : a in A, 1 <= i <= n} in G * F(X) * F(Y) * F(Z)."""

    base: MarkedGroup
    A: list
    n: int
    group: FreeProduct = field(init=False)
    T: list = field(init=False)
    names: list[str] = field(init=False)

    def __post_init__(self):
        if not self.base.is_finite:
            raise ValueError("base group must have a finite exact engine")
        if self.n < 1 or not self.A:
            raise ValueError("need n >= 1 and A nonempty")
        if any(self.base.is_identity(a) for a in self.A) or len(set(self.A)) != len(self.A):
            raise ValueError("A must consist of distinct nontrivial elements")
        k = len(self.A)
        factors = [self.base] + [cyclic_group(0, "f") for _ in range(self.n + 2 * k)]
        names = list(self.base.generators)
        names += [f"x{i}" for i in range(1, self.n + 1)]
        names += [f"y{j}" for j in range(1, k + 1)] + [f"z{j}" for j in range(1, k + 1)]
        self.group = FreeProduct(factors, names)
        P = self.group
        self.T, self.names = [], []
        for j, a in enumerate(self.A):
            for i in range(self.n):
                x, y, z = 1 + i, 1 + self.n + j, 1 + self.n + k + j
                sy = [P.syllable(y, (1,)), P.syllable(x, (1,)), P.syllable(0, a),
                      P.syllable(x, (-1,)), P.syllable(z, (1,))]
                t = ()
                for piece in sy:
                    t = P.mul(t, piece)
                self.T.append(t)
                self.names.append(f"t{j + 1}_{i + 1}")

    def family(self) -> GeneratorFamily:
        return GeneratorFamily(self.group, list(self.T), list(self.names), [(1, 2, 3)] * len(self.T))

    def planted(self) -> GeneratorFamily:
        """{t_1, t_1^2}: a dependent pair over the same free product."""
        t = self.T[0]
        return GeneratorFamily(self.group, [t, self.group.mul(t, t)], ["t1", "t2"])


@dataclass
class CertificateReport:
    lengths: int
    words_checked: int
    cores_checked: int
    malnormal_samples: int
    per_length: list[int]

    def as_json(self) -> dict:
        return {"length_cap": self.lengths, "words_checked": self.words_checked,
                "cores_checked": self.cores_checked, "malnormal_samples": self.malnormal_samples,
                "words_per_length": self.per_length, "certified": True}


def _tagged_reduce(P: FreeProduct, pieces: list[list]) -> list:
    """Reduce concatenated syllables, recording merges; entries are [factor, elem, tag, intact]."""
    out: list = []
    for piece in pieces:
        for k, g, tag in piece:
            cur = [k, g, tag, True]
            while out and cur is not None and out[-1][0] == cur[0]:
                prev = out.pop()
                F = P.factors[k]
                prod = F.mul(prev[1], cur[1])
                if F.is_identity(prod):
                    cur = None
                else:
                    cur = [k, prod, (prev[2], cur[2]), False]
            if cur is not None:
                out.append(cur)
    return out


def _t_word_name(word, names):
    return " ".join(names[j] + ("^-1" if e < 0 else "") for j, e in word)


def _reduced_t_words(r: int, length: int):
    letters = [(j, e) for j in range(r) for e in (1, -1)]
    for w in product(letters, repeat=length):
        if all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(w, w[1:])):
            yield w


def _parse_in_span(P: FreeProduct, blocks: dict, g) -> bool:
    """g is a reduced product of the five-syllable generators iff its normal form splits into blocks."""
    if len(g) % 5:
        return False
    return all(g[i:i + 5] in blocks for i in range(0, len(g), 5))


def free_basis_certify(inst: FreeBasisInstance | GeneratorFamily, L: int, samples: int = 200,
                       sample_length: int = 4, seed: int = 0) -> CertificateReport:
    """Certify freeness (and core survival) for every reduced T-word of length <= L.

    Raises CertificationFailed at the first length with a trivial product,
    carrying every trivial word of that length.
    """
    fam = inst.family() if isinstance(inst, FreeBasisInstance) else inst
    P = fam.group
    r = len(fam.elements)
    inverses = [P.inv(t) for t in fam.elements]
    per_length = []
    words = cores = 0
    for length in range(1, L + 1):
        bad = []
        count = 0
        for w in _reduced_t_words(r, length):
            count += 1
            pieces = []
            for pos, (j, e) in enumerate(w):
                el = fam.elements[j] if e > 0 else inverses[j]
                core = set()
                if fam.cores is not None:
                    cpos = fam.cores[j]
                    # the inverse reverses syllable order
                    core = set(cpos) if e > 0 else {len(el) - 1 - c for c in cpos}
                pieces.append([(k, g, (pos, q) if q in core else None) for q, (k, g) in enumerate(el)])
            red = _tagged_reduce(P, pieces)
            g = tuple((k, h) for k, h, _, _ in red)
            direct = P.identity
            for j, e in w:
                direct = P.mul(direct, fam.elements[j] if e > 0 else inverses[j])
            if g != direct:
                raise InvariantViolated("tagged reduction agrees with the engine")
            if not g:
                bad.append(_t_word_name(w, fam.names))
                continue
            if fam.cores is not None:
                intact = {tag for _, _, tag, ok in red if ok and tag is not None}
                for pos, (j, e) in enumerate(w):
                    need = {(pos, q) for q in range(len(fam.elements[j]))
                            if (q if e > 0 else len(fam.elements[j]) - 1 - q) in fam.cores[j]}
                    cores += 1
                    if not need <= intact:
                        raise CertificationFailed(
                            f"core of constituent {pos + 1} does not survive",
                            _t_word_name(w, fam.names))
        if bad:
            raise CertificationFailed(f"{len(bad)} trivial T-words of length {length}", bad[0], bad)
        per_length.append(count)
        words += count
    checked = 0
    if fam.cores is not None and samples:
        blocks = set(fam.elements) | set(inverses)
        rng = random.Random(seed)
        m2 = 2 * P.rank
        tries = 0
        while checked < samples and tries < 50 * samples:
            tries += 1
            w = reduce_word(rng.randrange(m2) for _ in range(rng.randint(1, sample_length)))
            p = evaluate_word(P, w)
            if not p or _parse_in_span(P, blocks, p):
                continue
            for t in fam.elements:
                c = P.mul(P.mul(p, t), P.inv(p))
                if _parse_in_span(P, blocks, c):
                    raise CertificationFailed("conjugate lands in the span (malnormality)",
                                              format_word(w, P.generators))
            checked += 1
    return CertificateReport(L, words, cores, checked, per_length)


# --- H_n against the lamplighter ----------------------------------------------


def hn_limit_experiment(n_values: Sequence[int], depth: int, method: str = "convolution") -> list[dict]:
    """Per n: relator images, termwise trace domination, conjugation certificates, rho estimates."""
    out = []
    for n in n_values:
        H = HnGroup(n)
        Lp = Lamplighter(n)
        hom = Homomorphism(H, Lp, [Lp.generator(i) for i in range(H.rank)])
        rel = hom.check()
        MH = averaging_operator(H, symmetrized=True)
        ML = hom.push(MH)
        if ML != averaging_operator(Lp, symmetrized=True):
            raise InvariantViolated("averaging operator maps to averaging operator")
        sH = power_trace_sequence(MH, depth, method)
        sL = power_trace_sequence(ML, depth, method)
        rep = _compare(sH.traces, sL.traces, depth, True, "trace domination H_n -> lamplighter")
        certs = conjugation_certificates(H)
        for u, form in certs:
            if form.t_length == 0 or has_pinch(H, form):
                raise InvariantViolated("conjugation certificate", f"n={n}, u={u}")
        eH, eL = estimate_from_sequence(sH), estimate_from_sequence(sL)
        out.append({
            "n": n,
            "relators_checked": rel,
            "certificates": len(certs),
            "min_t_length": min(f.t_length for _, f in certs),
            "traces_hn": [str(t) for t in sH.traces],
            "traces_lamplighter": [str(t) for t in sL.traces],
            "strict": rep.strict,
            "rho_hn_bound": sH.bounds[-1],
            "rho_lamplighter_bound": sL.bounds[-1],
            "rho_hn_extrapolated": eH.extrapolated,
            "rho_lamplighter_extrapolated": eL.extrapolated,
        })
    return out

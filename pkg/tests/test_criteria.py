import math
import random
from fractions import Fraction

import pytest

from groupnorms.algebra import AlgebraElement
from groupnorms.criteria import (FreeBasisInstance, GeneratorFamily, Homomorphism,
                                 domination_check, free_basis_certify, hn_limit_experiment,
                                 infinitesimal_report, is_free_basis, powers_average_bounds,
                                 rebalance_homomorphism, trace_monotonicity_check)
from groupnorms.errors import CertificationFailed, InvalidHomomorphism
from groupnorms.groups import (AbelianGroup, FreeGroup, HnGroup, burnside_group, cyclic_group,
                               evaluate_word, free_abelian)

F2 = FreeGroup(["x1", "x2"])
x1, x2 = F2.generator(0), F2.generator(1)


def test_free_basis_detection():
    assert is_free_basis([(0,), (2, 0, 3), (2, 2, 0, 3, 3)])
    assert not is_free_basis([(0,), (0, 0)])
    assert is_free_basis([(0, 2), (2,)])
    assert not is_free_basis([(0, 2), (2,), (0,)])
    assert not is_free_basis([(0, 2, 1, 3), (2, 0, 3, 1)])


def test_powers_average_abelian_is_one():
    Z2 = free_abelian(2)
    est = powers_average_bounds(Z2, Z2.generator(0), [Z2.identity, Z2.generator(1)], 8,
                                u=Z2.generator(1))
    assert est.bounds == [1.0] * 8 and est.extrapolated == 1.0


def test_powers_average_trivial_conjugators():
    est = powers_average_bounds(F2, x1, [F2.identity], 6)
    assert est.bounds == [1.0] * 6


def test_powers_average_free_basis():
    Y = [F2.identity, x2, F2.mul(x2, x2)]
    est = powers_average_bounds(F2, x1, Y, 60)
    assert est.diagnostics["restriction"] == "free-basis-rank-3"
    assert abs(est.extrapolated - 2 * math.sqrt(2) / 3) < 0.01
    with pytest.raises(ValueError):
        powers_average_bounds(F2, F2.identity, Y, 4)


def test_conjugate_commutator_identity_random():
    # exact equality of the trace sequences of s, s g^-1 and u s
    rng = random.Random(3)
    for G in (F2, burnside_group()):
        for _ in range(20):
            rand = lambda: evaluate_word(G, [rng.randrange(4) for _ in range(rng.randint(0, 4))])  # noqa: E731
            g = rand()
            if G.is_identity(g):
                continue
            Y = [rand() for _ in range(rng.randint(1, 3))]
            powers_average_bounds(G, g, Y, 3, u=rand(), identity_depth=3, method="convolution")


def test_monotonicity_f2_to_z():
    Z = cyclic_group(0)
    a = AlgebraElement(F2, {x1: 1, x2: 1})
    rep = trace_monotonicity_check(a, Homomorphism(F2, Z, [(1,), (1,)]), 10)
    assert rep.lower == [math.comb(2 * n, n) for n in range(1, 11)]
    assert rep.upper == [4 ** n for n in range(1, 11)]
    assert all(rep.strict)


def test_monotonicity_abelianization_equality():
    Z2 = free_abelian(2)
    a = AlgebraElement(F2, {x1: 1, x2: 1})
    rep = trace_monotonicity_check(a, Homomorphism(F2, Z2, [Z2.generator(0), Z2.generator(1)]), 10)
    assert all(rep.equal)


def test_monotonicity_through_finite_quotients():
    B = burnside_group()
    a = AlgebraElement(F2, {x1: 1, x2: 2, F2.element("x1 x2"): Fraction(1, 2)})
    rep = trace_monotonicity_check(a, Homomorphism(F2, B, [B.generator(0), B.generator(1)]), 6)
    assert rep.passed


def test_invalid_homomorphism():
    with pytest.raises(InvalidHomomorphism):
        Homomorphism(cyclic_group(3), cyclic_group(2), [(1,)]).check()


def test_domination():
    rep = domination_check(AlgebraElement(F2, {x1: 1}), AlgebraElement(F2, {x1: 1, x2: 1}), 8)
    assert rep.passed and rep.lower == [1] * 8
    with pytest.raises(ValueError):
        domination_check(AlgebraElement(F2, {x1: 2}), AlgebraElement(F2, {x1: 1}), 2)


@pytest.mark.parametrize("k,l,q,r", [(5, 2, 2, 1), (3, 3, 1, 0), (6, 3, 2, 0), (7, 1, 7, 0), (9, 4, 2, 1)])
def test_rebalance(k, l, q, r):
    R = rebalance_homomorphism(k, l)
    assert (R.q, R.r) == (q, r)
    Fl = R.hom.target
    assert R.image[Fl.identity] == r
    assert all(R.image[Fl.generator(j)] == q for j in range(l))


def test_rebalance_all_small():
    for k in range(1, 9):
        for l in range(1, k + 1):
            rebalance_homomorphism(k, l)


def test_infinitesimal_free_family():
    rep = infinitesimal_report([(i, FreeGroup(i)) for i in range(2, 6)], 40, cogrowth_depth=6,
                               cheeger_radius=3)
    targets = [1, 0.9428, 0.8660, 0.8]
    for row, t in zip(rep.rows, targets):
        assert abs(row["ax_extrapolated"] - t) < 0.02
        assert abs(row["rho_extrapolated"] - math.sqrt(2 * row["i"] - 1) / row["i"]) < 0.02
        assert row["girth"] is None
    assert rep.trend["ax_decreasing"]
    assert set(rep.rows[0]) >= {"i", "ax_bound", "rho_bound", "cheeger_ratio", "omega_ratio",
                                "girth", "mode_flags"}


def test_infinitesimal_constant_amenable_family():
    rep = infinitesimal_report([(i, free_abelian(2)) for i in range(1, 4)], 20, cogrowth_depth=8)
    assert rep.trend["verdict"] == "not infinitesimal"
    assert all(r["rho_extrapolated"] > 0.99 for r in rep.rows)


def test_infinitesimal_records_errors():
    rep = infinitesimal_report([(1, burnside_group())], 4, cogrowth_depth=4, subset_cap=10)
    assert "cheeger" in rep.rows[0]["errors"]
    assert rep.rows[0]["girth"] == 3


def test_free_basis_instance_shape():
    inst = FreeBasisInstance(cyclic_group(3, "a"), [(1,)], 2)
    assert len(inst.T) == 2
    assert all(len(t) == 5 for t in inst.T)
    inst2 = FreeBasisInstance(AbelianGroup([2, 2], ["a", "b"]), [(1, 0), (0, 1), (1, 1)], 3)
    assert len(inst2.T) == 9


def test_free_basis_certify_passes():
    inst = FreeBasisInstance(cyclic_group(3, "a"), [(1,)], 2)
    rep = free_basis_certify(inst, 4)
    assert rep.per_length == [4, 12, 36, 108]
    assert rep.malnormal_samples > 0
    inst2 = FreeBasisInstance(cyclic_group(3, "a"), [(1,), (2,)], 1)
    assert free_basis_certify(inst2, 3).words_checked == 4 + 12 + 36


def test_free_basis_planted_dependence():
    inst = FreeBasisInstance(cyclic_group(3, "a"), [(1,)], 2)
    with pytest.raises(CertificationFailed) as exc:
        free_basis_certify(inst.planted(), 4)
    assert "t2 t1^-1 t1^-1" in exc.value.witnesses
    assert all(len(w.split()) == 3 for w in exc.value.witnesses)


def test_free_basis_generic_family_dependent():
    inst = FreeBasisInstance(cyclic_group(3, "a"), [(1,)], 2)
    P = inst.group
    t1, t2 = inst.T
    fam = GeneratorFamily(P, [t1, t2, P.mul(t1, t2)], ["u", "v", "w"])
    with pytest.raises(CertificationFailed) as exc:
        free_basis_certify(fam, 3)
    assert exc.value.witness is not None


def test_hn_limit_n1():
    rep = hn_limit_experiment([1], 6)[0]
    assert rep["relators_checked"] == len(HnGroup(1).relators())
    assert rep["certificates"] == 7 and rep["min_t_length"] > 0
    assert rep["rho_hn_bound"] <= rep["rho_lamplighter_bound"]

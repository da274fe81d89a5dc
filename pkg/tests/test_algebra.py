from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from groupnorms.algebra import (AlgebraElement, averaging_operator, convolve, integral_scaling,
                                involute, one, parse_element, power_trace_sequence, trace)
from groupnorms.errors import ConfigError, InvariantViolated, ResourceExceeded
from groupnorms.groups import FreeGroup, burnside_group, cyclic_group
from oracles import heisenberg3_letter, heisenberg3_mul, matrix_trace_powers, walk_return_probability

F2 = FreeGroup(["x1", "x2"])
Z = cyclic_group(0)
B23 = burnside_group()


def test_parse_and_collect():
    assert parse_element(Z, "1 + 2*(x x^-1) - x") == 3 * one(Z) - AlgebraElement(Z, {(1,): 1})
    assert parse_element(Z, "x - x^-1 x x") == 0
    Z3 = cyclic_group(3)
    assert parse_element(Z3, "x + 2*(x^4)") == AlgebraElement(Z3, {(1,): 3})
    a = parse_element(F2, "1 + 2*(x1 x2^-1) - 3/2*(x1)")
    assert a[F2.element("x1")] == Fraction(-3, 2)
    with pytest.raises(ConfigError):
        parse_element(F2, "1 + (x1")


def test_star_and_trace_basics():
    a = parse_element(F2, "2*(x1) + 3*(x1 x2)")
    assert trace(a) == 0
    assert trace(involute(a) * a) == 13
    assert involute(involute(a)) == a
    assert integral_scaling(parse_element(Z, "1/2*(x) + 1/3"))[1] == 6


def test_one_plus_x_gives_central_binomials():
    from math import comb
    seq = power_trace_sequence(parse_element(Z, "1 + x"), 10)
    assert seq.traces == [comb(2 * n, n) for n in range(1, 11)]


def test_free_traces_match_brute_force_walks():
    M = averaging_operator(F2, symmetrized=True)
    expect = [walk_return_probability(2, 2 * n) for n in range(1, 5)]
    assert expect == [Fraction(1, 4), Fraction(7, 64), Fraction(29, 512), Fraction(523, 16384)]
    for method in ("tree", "convolution"):
        assert power_trace_sequence(M, 4, method).traces == expect


def test_tree_kernel_asymmetric_weights():
    F3 = FreeGroup(3)
    a = AlgebraElement(F3, {(0,): 2, (3,): Fraction(1, 3), (4,): 5})
    assert power_trace_sequence(a, 7, "tree").traces == power_trace_sequence(a, 7, "convolution").traces


def test_burnside_traces_against_regular_representation():
    # independent model of B(2,3): the Heisenberg group mod 3
    elems = [(x, y, z) for x in range(3) for y in range(3) for z in range(3)]
    sup = {heisenberg3_letter(0): 1, heisenberg3_letter(2): 1}
    expect = matrix_trace_powers(elems, heisenberg3_mul, sup, 5)
    a = AlgebraElement(B23, {B23.generator(0): 1, B23.generator(1): 1})
    assert power_trace_sequence(a, 5).traces == expect


def test_support_cap():
    with pytest.raises(ResourceExceeded):
        power_trace_sequence(averaging_operator(FreeGroup(3), True), 8, "convolution", cap=1000)


def test_check_rejects_bad_sequence():
    seq = power_trace_sequence(parse_element(Z, "1 + x"), 3)
    seq.counts[2] = 1
    with pytest.raises(InvariantViolated):
        seq.check()


small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
short = st.lists(st.integers(0, 3), max_size=4).map(tuple)


def elements(G):
    return st.dictionaries(short, small, max_size=4).map(
        lambda d: AlgebraElement(G, {G.element(" ".join(G.generators[c // 2] + ("^-1" if c % 2 else "")
                                                         for c in w) or "1"): v for w, v in d.items()}))


@settings(max_examples=60, deadline=None)
@given(elements(F2), elements(F2), elements(F2))
def test_algebra_identities_exact(a, b, c):
    assert trace(a * b) == trace(b * a)
    assert involute(a * b) == involute(b) * involute(a)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert trace(involute(a) * a) == a.l2_squared()


@settings(max_examples=40, deadline=None)
@given(elements(B23), elements(B23))
def test_cyclicity_in_finite_engine(a, b):
    assert trace(convolve(a, b)) == trace(convolve(b, a))
    assert involute(a * b) == involute(b) * involute(a)


@settings(max_examples=30, deadline=None)
@given(elements(F2))
def test_trace_power_invariants(a):
    if not a:
        return
    seq = power_trace_sequence(a, 5, "convolution")
    seq.check()
    b = seq.bounds
    assert all(x <= y + 1e-12 for x, y in zip(b, b[1:]))
    assert b[-1] <= float(a.l1_norm()) + 1e-12

import math
from fractions import Fraction

import pytest

from groupnorms.algebra import AlgebraElement, averaging_operator, parse_element
from groupnorms.errors import ResourceExceeded
from groupnorms.groups import FreeGroup, burnside_group, cyclic_group, free_abelian
from groupnorms.spectral import (check_oracle_agreement, extrapolate, free_norm_value,
                                 free_tree_return_oracle, free_walk_convolution_traces,
                                 kesten_free_value,
                                 operator_norm_bounds, spectral_radius_bounds)
from oracles import walk_return_probability


def test_radial_oracle_matches_brute_force():
    assert free_tree_return_oracle(2, 4) == [walk_return_probability(2, 2 * n) for n in range(1, 5)]
    assert free_tree_return_oracle(3, 3) == [walk_return_probability(3, 2 * n) for n in range(1, 4)]


def test_single_generator_norm_is_one():
    est = operator_norm_bounds(AlgebraElement(FreeGroup(2), {(0,): 1}), 10)
    assert est.bounds == [1.0] * 10 and est.extrapolated == 1.0


def test_one_plus_x_extrapolates_to_two():
    est = operator_norm_bounds(parse_element(cyclic_group(0), "1 + x"), 60)
    assert abs(est.extrapolated - 2) < 0.01
    assert est.last_bound < 2


def test_z_radius_first_bound():
    est = spectral_radius_bounds(cyclic_group(0), 30)
    assert est.bounds[0] == pytest.approx(math.sqrt(0.5))
    assert abs(est.extrapolated - 1) < 0.01


def test_finite_group_radius_is_one():
    est = spectral_radius_bounds(burnside_group(), 20)
    assert abs(est.extrapolated - 1) < 0.01


def test_z2_radius():
    assert abs(spectral_radius_bounds(free_abelian(2), 30).extrapolated - 1) < 0.01


def test_extrapolate_recovers_planted_model():
    L, beta = 0.9, -1.5
    logs = [2 * n * math.log(L) + beta * math.log(n) + 0.3 for n in range(1, 61)]
    got, diag = extrapolate(logs)
    assert abs(got - L) < 1e-9 and abs(diag["exponent"] - beta) < 1e-6
    got, _ = extrapolate(logs, fixed_exponent=beta)
    assert abs(got - L) < 1e-9


def test_reference_values():
    assert free_norm_value(2) == 1.0
    assert kesten_free_value(2) == pytest.approx(math.sqrt(3) / 2)


def test_csv_rows_shape():
    est = spectral_radius_bounds(FreeGroup(2), 3)
    rows = est.csv_rows()
    assert rows[0] == ["n", "trace_numerator", "trace_denominator", "bound", "extrapolated"]
    assert rows[1][:3] == ["1", "1", "4"]


def test_oracle_agreement_small():
    assert check_oracle_agreement(2, 6, "convolution")[1] == Fraction(7, 64)


def test_norm_and_radius_inequalities_free_family():
    # ||A_X|| <= 2 rho and rho <= ||A_X||, within twice the fit tolerance
    for i in range(2, 6):
        F = FreeGroup(i)
        ax = operator_norm_bounds(averaging_operator(F), 60).extrapolated
        rho = spectral_radius_bounds(F, 60).extrapolated
        assert ax <= 2 * rho + 0.02 and rho <= ax + 0.02


def test_element_array_convolution():
    assert free_walk_convolution_traces(2, 10) == free_tree_return_oracle(2, 10)
    assert free_walk_convolution_traces(1, 6) == [Fraction(math.comb(2 * n, n), 4 ** n) for n in range(1, 7)]
    with pytest.raises(ResourceExceeded):
        free_walk_convolution_traces(3, 12, cap=1000)

from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dirichlet_cf.combinatorics import Partition, Permutation, cyclic_group, enumerate_partitions, symmetric_group
from dirichlet_cf.cycle_index import (
    N_MAX,
    NotAGroupError,
    cycle_index,
    cycle_index_brute,
    cycle_index_direct,
    cycle_index_group,
    cycle_index_recurrence,
    cycle_index_values,
)
from dirichlet_cf.dirichlet import pochhammer


def P(*freq):
    return Partition(tuple(freq))


def test_small_cases_by_hand():
    assert cycle_index(0).terms == {Partition(()): 1}
    assert cycle_index(1).terms == {P(1): 1}
    assert cycle_index(2).terms == {P(2, 0): Fraction(1, 2), P(0, 1): Fraction(1, 2)}
    z3 = cycle_index(3)
    assert z3.coefficient(P(3, 0, 0)) == Fraction(1, 6)
    assert z3.coefficient(P(1, 1, 0)) == Fraction(1, 2)
    assert z3.coefficient(P(0, 0, 1)) == Fraction(1, 3)


@pytest.mark.parametrize("n", range(1, 8))
def test_routes_agree_with_brute_force(n):
    brute = cycle_index_brute(n)
    assert cycle_index_direct(n) == brute
    assert cycle_index_recurrence(n) == brute


def test_recurrence_matches_direct_to_twelve():
    for n in range(13):
        assert cycle_index_recurrence(n) == cycle_index_direct(n)


def test_group_cycle_indices():
    assert cycle_index_group([Permutation.identity(3)]).terms == {P(3, 0, 0): 1}
    assert cycle_index_group(symmetric_group(3)) == cycle_index_direct(3)
    c4 = cycle_index_group(cyclic_group(4))
    assert c4.terms == {P(4, 0, 0, 0): Fraction(1, 4), P(0, 2, 0, 0): Fraction(1, 4),
                        P(0, 0, 0, 1): Fraction(1, 2)}


def test_not_a_group():
    with pytest.raises(NotAGroupError):
        cycle_index_group([Permutation.identity(3), Permutation((2, 3, 1))])


def test_range_guard():
    with pytest.raises(ValueError):
        cycle_index(-1)
    with pytest.raises(ValueError):
        cycle_index(N_MAX + 1)


@pytest.mark.parametrize("n", range(11))
def test_all_ones_gives_one(n):
    assert cycle_index(n).evaluate([1] * n) == pytest.approx(1)
    assert cycle_index(n).evaluate_exact([1] * n) == 1


@given(st.integers(0, 12), st.fractions(Fraction(-3), Fraction(3), max_denominator=7),
       st.fractions(Fraction(1, 5), Fraction(5), max_denominator=7))
def test_geometric_point_gives_rising_factorial(n, t, c):
    # Z_n(c t, c t^2, ..., c t^n) = t^n (c)_n / n!
    point = [c * t**j for j in range(1, n + 1)]
    assert cycle_index(n).evaluate_exact(point) == t**n * pochhammer(c, n) / factorial(n)


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3), st.floats(-2, 2))
def test_homogeneity(t, a):
    z = cycle_index(3)
    scaled = [a * t[0], a**2 * t[1], a**3 * t[2]]
    assert abs(z.evaluate(scaled) - a**3 * z.evaluate(t)) <= 1e-12 * (1 + abs(a**3 * z.evaluate(t)))


def test_coefficients_are_class_fractions():
    for n in range(1, 10):
        z = cycle_index(n)
        assert sum(c for _, c in z.items()) == 1
        assert [lam for lam, _ in z.items()] == list(enumerate_partitions(n))


def test_numeric_values_match_polynomials():
    rng = np.random.default_rng(1)
    p = rng.normal(size=20) + 1j * rng.normal(size=20)
    vals = cycle_index_values(p, 20)
    for n in range(21):
        exact = cycle_index(n).evaluate(p)
        assert abs(vals[n] - exact) <= 1e-10 * (1 + abs(exact))


def test_evaluate_needs_enough_values():
    with pytest.raises(ValueError):
        cycle_index(3).evaluate([1, 2])

from __future__ import annotations

from fractions import Fraction

import pytest

from airytr.virasoro import (BGW, KW, FockPolynomial, VirasoroOperator, apply_virasoro, bgw_x1_series,
                             commutator_check, sector_weight, solve_by_recursion, verify_annihilation)


@pytest.fixture(scope="module")
def kw_table():
    return solve_by_recursion(KW, 9, 2)


def test_initial_conditions_of_the_operators():
    residual = apply_virasoro(VirasoroOperator(KW, -1), FockPolynomial())
    assert residual.terms == {((1, 1), -1): Fraction(1, 4)}
    residual = apply_virasoro(VirasoroOperator(BGW, 0), FockPolynomial())
    assert residual.terms == {((), 0): Fraction(1, 16)}


def test_kw_intersection_numbers(kw_table):
    assert kw_table.intersection_number(0, (0, 0, 0)) == 1
    assert kw_table.intersection_number(0, (0, 0, 0, 1)) == 1
    assert kw_table.intersection_number(1, (1,)) == Fraction(1, 24)
    assert kw_table.intersection_number(1, (0, 2)) == Fraction(1, 24)
    assert kw_table.intersection_number(2, (4,)) == Fraction(1, 1152)


def test_kw_dimension_constraint(kw_table):
    for (h, n), poly in kw_table.sectors.items():
        for mono in poly:
            ks = [(l - 1) // 2 for l in mono]
            assert sum(ks) == 3 * h - 3 + n
        assert sector_weight(KW, h, n) == 3 * h - 3 + 2 * n


@pytest.mark.parametrize("variant,weight,genus", [(KW, 9, 2), (BGW, 6, 3)])
def test_solution_is_annihilated(variant, weight, genus):
    assert verify_annihilation(solve_by_recursion(variant, weight, genus)) == []


def test_perturbed_solution_is_not_annihilated(kw_table):
    log_z = kw_table.log_z()
    broken = kw_table.__class__(KW, kw_table.max_weight, kw_table.max_genus, kw_table.sectors)
    broken.sectors[(1, 1)] = {(1,): Fraction(1, 12)}
    assert verify_annihilation(broken) != []
    assert log_z == kw_table.log_z()


@pytest.mark.parametrize("variant,m,n", [(KW, 0, 1), (KW, -1, 1), (KW, -1, 2), (KW, 1, 2), (BGW, 0, 0),
                                         (BGW, 0, 1), (BGW, 1, 2)])
def test_commutators(variant, m, n):
    assert commutator_check(variant, m, n)


def test_bgw_x1_axis_is_a_logarithm():
    """The solved axis is -(1/8) log(1 - x^1): coefficients +1/(8n)."""
    series = bgw_x1_series(solve_by_recursion(BGW, 8, 1), 8)
    assert series == [Fraction(1, 8 * n) for n in range(1, 9)]


def test_fock_polynomial_algebra():
    p = FockPolynomial({((1,), 0): Fraction(1, 2)})
    q = p.times_variable(3)
    assert q.derivative(3) == p
    assert (p + p).scale(Fraction(1, 2)) == p
    assert p.shift_hbar(2).terms == {((1,), 2): Fraction(1, 2)}

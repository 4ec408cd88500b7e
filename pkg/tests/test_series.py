from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airytr.series import (BergmanCorrections, BivariateSeries, LaurentDifferential, NonUnitDivisor, Series,
                           TruncationError, parity_split, rational_sqrt, residue_at_zero, symplectic_pair)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def series(draw, low=st.integers(-4, 2), length=st.integers(1, 8)):
    lo = draw(low)
    coeffs = draw(st.lists(rationals, min_size=draw(length), max_size=8))
    return Series(lo, coeffs, lo + len(coeffs) - 1)


@st.composite
def differentials(draw):
    terms = draw(st.dictionaries(st.integers(-5, 5).filter(lambda e: e != 0), rationals, max_size=6))
    return LaurentDifferential(Series.from_terms(terms, 8))


def test_polynomial_identities():
    one_plus = Series.from_terms({0: 1, 1: 1}, 5)
    one_minus = Series.from_terms({0: 1, 1: -1}, 5)
    assert one_plus * one_minus == Series.from_terms({0: 1, 2: -1}, 5)
    assert Series.monomial(3, 1, 6).derivative() == Series.from_terms({2: 3}, 5)
    geometric = Series.one(3) / Series.from_terms({0: 1, 1: -1}, 3)
    assert [geometric[k] for k in range(4)] == [1, 1, 1, 1]


def test_reading_past_the_window_raises():
    s = Series.from_terms({0: 1}, 3)
    with pytest.raises(TruncationError, match="truncation too short"):
        s[4]


def test_division_by_zero_series():
    with pytest.raises(NonUnitDivisor, match="non-unit divisor"):
        Series.one(3) / Series.zero(3)


def test_antiderivative_examples():
    assert LaurentDifferential.from_J({-2: 1}, 6).antiderivative()[2] == Fraction(1, 2)
    assert LaurentDifferential.from_J({2: 1}, 6).antiderivative()[-2] == Fraction(-1, 2)
    f = LaurentDifferential.from_J({-1: 3, -3: 4}, 6).antiderivative()
    assert (f[1], f[3]) == (3, Fraction(4, 3))


def test_residue_examples():
    d = LaurentDifferential.from_J({-1: 1}, 6)
    assert residue_at_zero(Series.from_terms({-1: 1}, 6), d) == 1
    assert residue_at_zero(Series.one(6), LaurentDifferential.from_J({-2: 1}, 6)) == 0
    d = LaurentDifferential.from_J({-1: 2, -3: 5}, 6)
    assert residue_at_zero(Series.from_terms({-3: 1}, 6), d) == 5


def test_residue_outside_window_raises():
    f = Series.from_terms({-3: 1}, 2)
    with pytest.raises(TruncationError):
        residue_at_zero(f, LaurentDifferential.from_J({-1: 1}, 1))


def test_residue_carrying_differential_is_rejected():
    with pytest.raises(ValueError):
        LaurentDifferential(Series.from_terms({0: 1}, 4))


@pytest.mark.parametrize("n", range(1, 9))
def test_pairing_nondegenerate_on_basis(n):
    assert symplectic_pair(LaurentDifferential.from_J({n: 1}, 12), LaurentDifferential.from_J({-n: 1}, 12)) == Fraction(-1, n)


def test_pairing_examples():
    z = LaurentDifferential.from_J({-1: 1}, 8)
    assert symplectic_pair(z, z) == 0
    assert symplectic_pair(LaurentDifferential.from_J({-2: 1}, 8), LaurentDifferential.from_J({-3: 1}, 8)) == 0


def test_parity_split_examples():
    even, odd = parity_split(Series.from_terms({0: 1, 1: 1, 2: 1}, 4))
    assert even == Series.from_terms({0: 1, 2: 1}, 4) and odd == Series.from_terms({1: 1}, 4)
    even, odd = parity_split(Series.from_terms({-1: 1, -2: 1}, 4))
    assert even == Series.from_terms({-2: 1}, 4) and odd == Series.from_terms({-1: 1}, 4)


@settings(max_examples=60, deadline=None)
@given(differentials(), differentials())
def test_pairing_antisymmetric(eta1, eta2):
    assert symplectic_pair(eta1, eta2) == -symplectic_pair(eta2, eta1)


@settings(max_examples=40, deadline=None)
@given(differentials(), differentials(), differentials(), rationals)
def test_pairing_bilinear(eta1, eta2, eta3, lam):
    combined = eta1 + eta2.scale(lam)
    assert symplectic_pair(combined, eta3) == symplectic_pair(eta1, eta3) + lam * symplectic_pair(eta2, eta3)


@settings(max_examples=60, deadline=None)
@given(differentials())
def test_antiderivative_then_derivative(eta):
    f = eta.antiderivative()
    # d/dz f = S(z)/z, i.e. z f' = S
    back = f.derivative().shift(1)
    for e in range(eta.series.low, eta.series.order + 1):
        assert back[e] == eta.series[e]


@settings(max_examples=50, deadline=None)
@given(series(), series(), series())
def test_multiplication_associative_commutative(a, b, c):
    assert a * b == b * a
    left, right = (a * b) * c, a * (b * c)
    order = min(left.order, right.order)
    assert left.truncate(order) == right.truncate(order)


@settings(max_examples=40, deadline=None)
@given(series(low=st.just(0)))
def test_inverse_of_units(a):
    if a[0] == 0:
        return
    prod = a * a.inverse()
    assert all(prod[k] == (1 if k == 0 else 0) for k in range(0, prod.order + 1))


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals, min_size=3, max_size=6))
def test_reversion_inverts_composition(tail):
    f = Series.from_terms({1: 1, **{k + 2: c for k, c in enumerate(tail)}}, 7)
    g = f.reversion()
    comp = f.compose(g)
    assert all(comp[k] == (1 if k == 1 else 0) for k in range(1, comp.order + 1))


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=6), st.integers(1, 6))
def test_sqrt_squares_back(tail, root):
    s = Series.from_terms({0: root, **{k + 1: c for k, c in enumerate(tail)}}, 7)
    square = s * s
    r = square.sqrt()
    assert r == s.truncate(r.order)


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(2) is None


def test_bivariate_inverse_and_difference_quotient():
    f = Series.from_terms({0: 1, 1: 2, 2: 3}, 6)
    # (f(z1) - f(z2)) / (z1 - z2) for f = 1 + 2z + 3z^2 is 2 + 3(z1 + z2)
    diff = BivariateSeries.from_product(f, Series.one(6), 6) - BivariateSeries.from_product(Series.one(6), f, 6)
    q = diff.divide_by_difference()
    assert q.coeffs == {(0, 0): 2, (1, 0): 3, (0, 1): 3}
    assert q.is_symmetric()
    inv = q.inverse()
    prod = q * inv
    assert all(prod[(i, j)] == (1 if (i, j) == (0, 0) else 0) for i in range(5) for j in range(5 - i))


def test_difference_quotient_rejects_nonvanishing_diagonal():
    with pytest.raises(ValueError):
        BivariateSeries({(1, 0): 1, (0, 0): 1}, 3).divide_by_difference()


def test_bergman_corrections_window():
    phi = BergmanCorrections({(0, 1, 0, 1): 2, (1, 0, 1, 0): 2}, 3)
    assert phi.is_symmetric()
    with pytest.raises(TruncationError):
        phi.get(0, 1, 2, 2)

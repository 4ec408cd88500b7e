from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airytr.airy import (AiryTensors, LabelClash, NonIntegrable, SymmetryViolation, abstract_tr,
                         bracket_closure_defect, build_bgw, build_kw, check_classical, check_quantum,
                         classical_expand, conic_catalan, conic_structure, conic_u1_coefficients, potential_s0,
                         product_structure, relabel, relation_residuals)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def test_kw_entries():
    kw = build_kw(9)
    assert kw.A(1, 1, 1) == Fraction(1, 2)
    assert kw.B(3, 1, 1) == Fraction(1, 2)
    assert kw.B(5, 3, 5) == Fraction(3, 2)
    assert kw.C(5, 1, 1) == Fraction(1, 2)
    assert kw.eps == {3: Fraction(1, 8)}
    assert all(m % 2 == 1 for m in kw.modes)


def test_bgw_entries():
    bgw = build_bgw(9)
    assert bgw.a == {}
    assert bgw.b and bgw.B(1, 1, 1) == Fraction(1, 2)
    assert bgw.eps == {1: Fraction(1, 8)}


@pytest.mark.parametrize("builder", [build_kw, build_bgw])
def test_structures_pass(builder):
    t = builder(15)
    classical, quantum = check_classical(t), check_quantum(t)
    assert classical.passed and classical.checked > 0
    assert quantum.passed and quantum.checked > 0
    assert classical.skipped > 0  # truncation edge is reported, not certified


def test_even_modes_explicit_still_pass():
    t = build_kw(11, include_even=True)
    assert check_classical(t).passed and check_quantum(t).passed


def test_quantum_shift_value_is_forced():
    kw = build_kw(11)
    assert not check_quantum(kw.with_changes(eps={3: 0})).passed
    assert not check_quantum(kw.with_changes(eps={3: Fraction(1, 16)})).passed
    bgw = build_bgw(11)
    # A = 0 and g_ij^1 = 0, so the relation leaves eps_1 free but forbids eps on higher modes
    assert check_quantum(bgw.with_changes(eps={1: 5})).passed
    assert not check_quantum(bgw.with_changes(eps={3: Fraction(1, 8)})).passed


def test_a111_perturbation_fails_mixed_relation():
    bad = build_kw(11).with_changes(a={(1, 1, 1): Fraction(3, 2)})
    report = check_classical(bad)
    assert not report.passed
    relation, key, _value = report.first_failure
    assert (relation, key[:2]) == (3, (1, 5))
    # the a-relation is homogeneous in a, so scaling a alone cannot break it
    assert not any(r == 2 for r, _k, _v in report.failures)


def test_b_perturbation_fails_a_relation():
    bad = build_kw(11).with_changes(b={(3, 1, 1): 1})
    relation, key, _value = check_classical(bad).first_failure
    assert (relation, key[:2]) == (2, (1, 3))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["a", "b", "c"]), st.integers(0, 40), st.sampled_from([Fraction(1, 3), -1, 2]))
def test_rank_one_perturbations_are_detected(kind, pick, delta):
    kw = build_kw(13)
    table = {"a": kw.a, "b": kw.b, "c": kw.c}[kind]
    keys = sorted(table)
    key = keys[pick % len(keys)]
    changed = kw.with_changes(**{kind: {key: table[key] + delta}})
    assert not check_classical(changed).passed


small_values = st.sampled_from([0, 0, 0, 1, -1, 2])


@st.composite
def random_structures(draw):
    modes = (1, 2, 3)
    triples = [(i, j, k) for i in modes for j in modes for k in modes]
    a = {k: draw(small_values) for k in triples if k[0] <= k[1] <= k[2]}
    b = {k: draw(small_values) for k in triples}
    c = {k: draw(small_values) for k in triples if k[1] <= k[2]}
    return AiryTensors(modes, a, b, c)


@settings(max_examples=40, deadline=None)
@given(random_structures())
def test_bracket_closure_matches_relation_residuals(t):
    """Two independent routes: polynomial Poisson brackets vs tensor contractions."""
    res = relation_residuals(t)
    seen = set()
    for i in t.modes:
        for j in t.modes:
            for mono, value in bracket_closure_defect(t, i, j).items():
                kinds = tuple(v[0] for v in mono)
                labels = tuple(v[1] for v in mono)
                assert len(mono) == 2, "defect must be purely quadratic"
                if kinds == ("x", "x"):
                    rel, key = 2, (i, j) + labels
                elif kinds == ("y", "y"):
                    rel, key = 4, (i, j) + labels
                else:
                    x = next(v[1] for v in mono if v[0] == "x")
                    y = next(v[1] for v in mono if v[0] == "y")
                    rel, key = 3, (i, j, x, y)
                multiplicity = 2 if kinds in (("x", "x"), ("y", "y")) and labels[0] != labels[1] else 1
                assert value == multiplicity * res[rel].get(key, 0)
                seen.add((rel, key))
    for rel in (2, 3, 4):
        for key, value in res[rel].items():
            if value:
                canonical = key if rel == 3 else key[:2] + tuple(sorted(key[2:]))
                assert (rel, canonical) in seen
    assert not any(res[1].values())


def test_product_structure():
    kw = build_kw(9)
    prod = product_structure([kw, kw], tags=[0, 1])
    assert check_classical(prod).passed and check_quantum(prod).passed
    assert all(len({l[0] for l in key}) == 1 for key in list(prod.a) + list(prod.b) + list(prod.c))
    with pytest.raises(LabelClash, match="label clash"):
        product_structure([kw, kw])
    assert relabel(kw, "p").A(("p", 1), ("p", 1), ("p", 1)) == Fraction(1, 2)


def test_product_abstract_tr_single_block_agrees():
    kw = build_kw(9)
    single = abstract_tr(kw, 3)
    prod = abstract_tr(product_structure([kw, kw], tags=[0, 1]), 3)
    for (h, n), entries in single.entries.items():
        for idx, value in entries.items():
            assert prod.get(h, tuple((1, i) for i in idx)) == value


def test_conic_expansion_is_catalan():
    assert conic_catalan(5) == [1, 2, 5, 14]
    assert conic_catalan(12) == [catalan(n) for n in range(1, 12)]


def test_expansion_stabilizes_and_bgw_is_zero():
    bgw = classical_expand(build_bgw(9), 6)
    assert all(c == 0 for m in build_bgw(9).modes for c in bgw.coefficients(m))
    kw = classical_expand(build_kw(9), 3)
    # y_1 = (1/2)(x^1)^2 + ...
    assert kw.coefficients(1, 1)[2] == Fraction(1, 2)


def test_potential():
    s0 = potential_s0(conic_structure(), 6)
    assert s0[(1, 1, 1)] == Fraction(1, 3)
    assert s0[(1, 1, 1, 1)] == Fraction(1, 2)
    assert s0[(1,) * 5] == 1
    assert potential_s0(build_bgw(9), 5) == {}
    assert potential_s0(build_kw(9), 3)[(1, 1, 1)] == Fraction(1, 6)


def test_non_airy_input_is_non_integrable():
    t = AiryTensors((1, 2), {(1, 1, 1): 1, (2, 2, 2): 1}, {(1, 1, 2): 1}, {})
    assert not check_classical(t).passed
    with pytest.raises(NonIntegrable, match="non-integrable"):
        potential_s0(t, 4)


def test_quantum_conic():
    expected = [4 ** n - factorial(2 * n) // factorial(n) ** 2 for n in range(1, 9)]
    assert conic_u1_coefficients(8) == expected


def test_abstract_tr_seeds():
    table = abstract_tr(build_kw(9), 2)
    assert table.get(0, (1, 1, 1)) == 1
    assert table.get(1, (3,)) == Fraction(1, 8)


def test_even_modes_never_appear():
    table = abstract_tr(build_kw(11, include_even=True), 3)
    for entries in table.entries.values():
        for idx, value in entries.items():
            if any(i % 2 == 0 for i in idx):
                assert value == 0


def test_symmetry_violation_on_broken_input():
    bad = build_kw(11).with_changes(a={(1, 1, 1): Fraction(3, 2)})
    with pytest.raises(SymmetryViolation, match="symmetry violation"):
        abstract_tr(bad, 3)

"""Acceptance criteria 1-11, one PASS/FAIL line each, asserted at the stated tolerances.

Run directly with ``python tests/test_acceptance.py`` or through pytest.
"""
from __future__ import annotations

import itertools
import time
from fractions import Fraction
from math import comb, factorial

import pytest

from airytr import recursion
from airytr.airy import build_bgw, build_kw, check_classical, check_quantum, conic_u1_coefficients
from airytr.cli import main, triple_comparison
from airytr.elliptic import (dm_cubic_by_finite_difference, dm_cubic_by_residue, parse_quartic, rauch_check,
                             relation_check_relat, theta_series_check)
from airytr.virasoro import BGW, KW, bgw_x1_series, solve_by_recursion

BASE_CURVE = "x^4-5x^2+4"


def report(capsys, number: int, passed: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


def test_criterion_01_catalan(capsys):
    start = time.perf_counter()
    code = main(["airy", "expand", "--conic", "--degree", "12"])
    out = capsys.readouterr().out.strip()
    elapsed = time.perf_counter() - start
    expected = ",".join(str(factorial(2 * n) // (factorial(n + 1) * factorial(n))) for n in range(1, 12))
    passed = code == 0 and out == expected and elapsed < 1
    report(capsys, 1, passed, f"output={out} runtime={elapsed:.3f}s")
    assert code == 0 and out == expected
    assert elapsed < 1


def test_criterion_02_quantum_conic(capsys):
    start = time.perf_counter()
    got = conic_u1_coefficients(8)
    elapsed = time.perf_counter() - start
    expected = [4 ** n - factorial(2 * n) // factorial(n) ** 2 for n in range(1, 9)]
    passed = got == expected and elapsed < 5
    report(capsys, 2, passed, f"u1={[str(c) for c in got]} runtime={elapsed:.3f}s")
    assert got == expected
    assert elapsed < 5


def test_criterion_03_constraint_suites(capsys):
    start = time.perf_counter()
    kw, bgw = build_kw(21), build_bgw(21)
    suites = {name: (check_classical(t), check_quantum(t)) for name, t in (("KW", kw), ("BGW", bgw))}
    perturbed = [
        check_classical(kw.with_changes(a={(1, 1, 1): Fraction(3, 2)})),
        check_classical(kw.with_changes(b={(3, 1, 1): kw.B(3, 1, 1) + 1})),
        check_classical(bgw.with_changes(b={(1, 1, 1): bgw.B(1, 1, 1) + 1})),
        check_quantum(kw.with_changes(eps={3: Fraction(1, 16)})),
    ]
    elapsed = time.perf_counter() - start
    clean = all(c.passed and q.passed and c.checked and q.checked for c, q in suites.values())
    caught = not any(r.passed for r in perturbed)
    counts = {k: (c.checked, q.checked) for k, (c, q) in suites.items()}
    report(capsys, 3, clean and caught and elapsed < 10,
           f"checked(classical,quantum)={counts} perturbations caught={caught} runtime={elapsed:.2f}s")
    assert clean and caught
    assert elapsed < 10


def test_criterion_04_triple_cross_validation(capsys):
    start = time.perf_counter()
    kw = triple_comparison("kw", 4)
    bgw = triple_comparison("bgw", 4)
    elapsed = time.perf_counter() - start
    passed = kw.passed and bgw.passed and kw.compared > 0 and bgw.compared > 0 and elapsed < 60
    report(capsys, 4, passed, f"airy compared={kw.compared} bessel compared={bgw.compared} "
                              f"first mismatch={kw.first_mismatch or bgw.first_mismatch} runtime={elapsed:.2f}s")
    assert kw.passed and bgw.passed and kw.compared > 0 and bgw.compared > 0
    assert elapsed < 60


def _partitions(h: int, n: int):
    """Multisets ``k_1 <= .. <= k_n`` with ``sum k = 3h - 3 + n``."""
    dim = 3 * h - 3 + n
    for ks in itertools.combinations_with_replacement(range(dim + 1), n):
        if sum(ks) == dim:
            yield ks


def test_criterion_05_intersection_numbers(capsys):
    table = recursion.compute_correlators(recursion.builtin_airy(40), 6, max_dim=5)
    numbers = recursion.intersection_numbers(table)
    oracle = solve_by_recursion(KW, 13, 2)
    mismatches, compared = [], 0
    for h in range(3):
        for n in range(1, 9):
            if 2 * h - 2 + n <= 0 or 3 * h - 3 + n > 5:
                continue
            for ks in _partitions(h, n):
                compared += 1
                ours, theirs = numbers.get((h, ks), Fraction(0)), oracle.intersection_number(h, ks)
                if ours != theirs:
                    mismatches.append((h, ks, ours, theirs))
    anchor = numbers[(0, (0, 0, 0))]
    passed = anchor == 1 and not mismatches
    report(capsys, 5, passed, f"<tau0^3>_0={anchor} compared={compared} mismatches={mismatches[:3]}")
    assert anchor == 1
    assert not mismatches


def test_criterion_06_bgw_initial_condition(capsys):
    got = bgw_x1_series(solve_by_recursion(BGW, 8, 1), 8)
    # (1/8) log(1 - x) = -sum x^n / (8 n)
    expected = [Fraction(-1, 8 * n) for n in range(1, 9)]
    passed = got == expected
    opposite = got == [-c for c in expected]
    report(capsys, 6, passed, f"got={[str(c) for c in got]} expected={[str(c) for c in expected]} "
                              f"opposite-sign match={opposite}")
    assert got == expected


def test_criterion_07_structural_invariants(capsys):
    curves = {
        "airy": recursion.builtin_airy(40),
        "bessel": recursion.builtin_bessel(40),
        "two-point": recursion.from_global_rational("z+1/z", "z", 24),
    }
    outcome = {}
    for name, curve in curves.items():
        table = recursion.compute_correlators(curve, 4)
        inv = recursion.check_invariants(table)
        residues = all(recursion.residue_free(table, h, n) for h, n in table.sectors)
        outcome[name] = (inv.passed and residues, len(table.sectors), inv.problems[:2])
    passed = all(ok for ok, _n, _p in outcome.values())
    report(capsys, 7, passed, f"{outcome}")
    assert passed


@pytest.fixture(scope="module")
def base_curve():
    return parse_quartic(BASE_CURVE)


def test_criterion_08_donagi_markman_cubic(capsys, base_curve):
    start = time.perf_counter()
    residue = dm_cubic_by_residue(base_curve).value
    fd = dm_cubic_by_finite_difference(base_curve, 1e-3).value
    elapsed = time.perf_counter() - start
    rel = abs(fd - residue) / abs(residue)
    report(capsys, 8, rel <= 1e-6 and elapsed < 30,
           f"residue={residue:.12g} fd={fd:.12g} relative={rel:.2e} runtime={elapsed:.2f}s")
    assert rel <= 1e-6
    assert elapsed < 30


def test_criterion_09_relat(capsys, base_curve):
    r = relation_check_relat(base_curve)
    passed = r.residual_printed <= 1e-8
    report(capsys, 9, passed, f"residual as stated={r.residual_printed:.3e} "
                              f"residual with derived sign={r.residual_derived:.3e}")
    assert r.residual_printed <= 1e-8


def test_criterion_10_theta_series(capsys, base_curve):
    r = theta_series_check(base_curve)
    period_ok = r.a_period_error <= 1e-10
    cubic_ok = all(2.7 <= o <= 3.3 for o in r.orders)
    prepotential_ok = r.prepotential_printed_error <= 1e-6
    report(capsys, 10, period_ok and cubic_ok and prepotential_ok,
           f"a-period error={r.a_period_error:.2e} orders={[round(o, 3) for o in r.orders]} "
           f"F0'' as stated rel error={r.prepotential_printed_error:.3e} "
           f"F0'' by differencing rel error={r.prepotential_fd_error:.2e}")
    assert period_ok
    assert cubic_ok
    assert prepotential_ok


def test_criterion_11_rauch(capsys, base_curve):
    r = rauch_check(base_curve)
    rauch_ok = r.residual_printed <= 1e-5
    kernel_ok = r.symmetry < 1e-10 and r.a_period < 1e-8
    report(capsys, 11, rauch_ok and kernel_ok,
           f"residual as stated={r.residual_printed:.3e} residual with derived sign={r.residual_derived:.2e} "
           f"symmetry={r.symmetry:.1e} a-period={r.a_period:.1e}")
    assert kernel_ok
    assert rauch_ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

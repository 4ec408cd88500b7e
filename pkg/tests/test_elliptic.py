from __future__ import annotations

import math

import numpy as np
import pytest

from airytr.elliptic import (TWO_PI_I, BergmanKernel, DegenerateCurve, QuarticCurve, a_loop, compute_periods,
                             cubic_residue_sum, default_sample_points, dm_cubic_by_finite_difference,
                             dm_cubic_by_residue, loop_integral, loop_orientation, loop_y, parse_quartic,
                             point_on_curve, rauch_check, rauch_rhs, relation_check_relat, theta_series_check)


@pytest.fixture(scope="module")
def base():
    return parse_quartic("x^4-5x^2+4")


@pytest.fixture(scope="module")
def generic():
    return QuarticCurve.from_roots([-1.3 - 0.2j, -0.4 + 0.5j, 0.7 - 0.1j, 1.6 + 0.3j])


def reduce_to_fundamental_domain(tau: complex) -> complex:
    for _ in range(100):
        tau = tau - round(tau.real)
        if abs(tau) < 1 - 1e-12:
            tau = -1 / tau
        else:
            return tau
    raise AssertionError("reduction did not terminate")


def test_periods_of_base_curve(base):
    p = compute_periods(base)
    assert p.tau.imag > 0
    assert p.tau == pytest.approx(1.5634019226961j, abs=1e-10)
    loop = a_loop(base)
    sign = loop_orientation(base, p, loop)
    xs, dxs = loop
    normalized = sign * loop_integral(np.array([1 / (p.A * loop_y(base, x)) for x in xs]), dxs)
    assert abs(normalized - 1) < 1e-10


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_square_symmetric_configuration_has_real_j(k):
    tau = compute_periods(QuarticCurve.from_roots([-1, 1, 1j * k, -1j * k])).tau
    red = reduce_to_fundamental_domain(tau)
    on_boundary = min(abs(red.real), abs(abs(red.real) - 0.5), abs(abs(red) - 1)) < 1e-9
    assert on_boundary


@pytest.mark.parametrize("lam", [0.3, 2.5])
def test_tau_invariant_under_rescaling(generic, lam):
    scaled = QuarticCurve.from_roots([lam * r for r in generic.roots])
    assert compute_periods(scaled).tau == pytest.approx(compute_periods(generic).tau, abs=1e-11)


def test_residue_side_converges_and_matches_closed_form(base, generic):
    for curve in (base, generic):
        report = dm_cubic_by_residue(curve)
        assert report.stable
        assert abs(report.value - report.closed_form) <= 1e-10 * abs(report.value)


def test_residue_sum_is_invariant_under_relabeling(generic):
    periods = compute_periods(generic)
    total, _ = cubic_residue_sum(generic, periods)
    shuffled = QuarticCurve(generic.coeffs, tuple(reversed(generic.roots)))
    total2, _ = cubic_residue_sum(shuffled, periods)
    assert total2 == pytest.approx(total, rel=1e-13)


def test_residue_side_scaling_law(base):
    lam, mu = 1.7, 0.6
    scaled = QuarticCurve.from_coefficients([c * mu ** 2 / lam ** k for k, c in enumerate(base.coeffs)])
    # x -> lam x, y -> mu y sends z to lam mu z and leaves tau fixed
    assert dm_cubic_by_residue(scaled).value * lam * mu == pytest.approx(dm_cubic_by_residue(base).value, rel=1e-12)


@pytest.mark.parametrize("which", ["base", "generic"])
def test_finite_difference_matches_residue(which, base, generic):
    curve = base if which == "base" else generic
    fd = dm_cubic_by_finite_difference(curve, 1e-3).value
    res = dm_cubic_by_residue(curve).value
    assert abs(fd - res) <= 1e-6 * abs(res)


def test_finite_difference_is_fourth_order(base):
    res = dm_cubic_by_residue(base).value
    errs = [abs(dm_cubic_by_finite_difference(base, h).value - res) for h in (0.1, 0.05, 0.025)]
    for coarse, fine in zip(errs, errs[1:]):
        assert 12 < coarse / fine < 20


def test_opposite_orientation_flips_the_cubic(base):
    fd = dm_cubic_by_finite_difference(base, 1e-3)
    res = dm_cubic_by_residue(base).value
    flipped = fd.dtau_dt / (-fd.dz_dt)
    assert abs(flipped + res) <= 1e-6 * abs(res)


def test_degenerate_curves_are_rejected():
    with pytest.raises(DegenerateCurve):
        QuarticCurve.from_roots([-1, -1 + 1e-10, 1, 2])
    with pytest.raises(DegenerateCurve):
        parse_quartic("x^4 - 2x^2 + 1")
    with pytest.raises(ValueError):
        parse_quartic("x^3 - x")


def test_relat_sign(base, generic):
    for curve in (base, generic):
        report = relation_check_relat(curve)
        assert report.residual_derived <= 1e-8
        assert report.residual_printed == pytest.approx(2.0, abs=1e-8)


def test_relat_homogeneity(base):
    lam, mu = 1.3, 0.8
    scaled = QuarticCurve.from_coefficients([c * mu ** 2 / lam ** k for k, c in enumerate(base.coeffs)])
    a, b = relation_check_relat(base), relation_check_relat(scaled)
    ratios_lhs = [x / y for x, y in zip(b.lhs, a.lhs)]
    ratios_rhs = [x / y for x, y in zip(b.rhs_derived, a.rhs_derived)]
    assert ratios_lhs == pytest.approx(ratios_rhs, rel=1e-10)


def test_bergman_kernel_self_checks(base, generic):
    for curve in (base, generic):
        kernel = BergmanKernel(curve)
        p, q = default_sample_points(curve)
        assert abs(kernel(p, q) - kernel(q, p)) < 1e-10
        assert abs(kernel.a_period(q)) < 1e-8
        assert abs(kernel.double_pole_coefficient(p) - 1) < 1e-6
        assert kernel.constant_spread([0.2 + 0.9j, -0.3 - 1.1j]) < 1e-10
        # Riemann bilinear: oint_b B(., p) = 2 pi i omega(p)
        assert kernel.b_period_constant() == pytest.approx(TWO_PI_I / kernel.periods.A, rel=1e-10)


def test_rauch_residue_routes_agree(generic):
    kernel = BergmanKernel(generic)
    p, q = default_sample_points(generic)
    series, closed = rauch_rhs(kernel, p, q)
    assert abs(series - closed) <= 1e-10 * abs(closed)


def test_rauch_sign(base, generic):
    for curve in (base, generic):
        report = rauch_check(curve)
        assert report.residual_derived <= 1e-5
        assert report.residual_printed == pytest.approx(2.0, abs=1e-5)


def test_rauch_guard(base):
    near = point_on_curve(base, 1.0 + 1e-4)
    far = default_sample_points(base)[1]
    with pytest.raises(ValueError, match="too close"):
        rauch_check(base, points=(near, far))


def test_theta_series(base, generic):
    for curve in (base, generic):
        report = theta_series_check(curve)
        assert report.a_period_error <= 1e-10
        assert all(2.8 < o < 3.2 for o in report.orders)
        assert report.prepotential_fd_error <= 1e-6
        # the printed normalization gives -tau/(2 pi i) instead of tau
        assert report.prepotential_printed == pytest.approx(-report.tau / TWO_PI_I, rel=1e-9)


def test_family_is_deterministic(base):
    a = dm_cubic_by_finite_difference(base, 1e-3).value
    b = dm_cubic_by_finite_difference(base, 1e-3).value
    assert a == b and not math.isnan(a.real)

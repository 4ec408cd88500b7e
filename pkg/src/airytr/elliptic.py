"""Numeric checks of period-variation formulas on genus-one curves ``y^2 = q(x)``.

The curve is a quartic ``q`` with four simple roots ordered by real part
``r1, r2, r3, r4``.  The a-cycle encircles the cut ``[r3, r4]`` and the
b-cycle runs from that cut to ``[r1, r2]`` through the segment ``[r2, r3]``;
its orientation is chosen once so that ``Im tau > 0``.  The deformation
``q_t = q - t`` is compared at fixed ``x`` and the period coordinate is
``z = oint_a (y_0 - y_t) dx``, so ``dz/dt = A/2`` with ``A = oint_a dx/y``.

Everything here is binary64: periods come from adaptive quadrature and local
quantities at a ramification point from power series in ``s = y``.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

TWO_PI_I = 2j * math.pi
NUMERIC_FLOOR = 1e-13
# a double root comes back from the eigenvalue solver split by about sqrt(eps)
COLLISION_RADIUS = 1e-6


class DegenerateCurve(ValueError):
    pass


class QuadratureError(ArithmeticError):
    pass


# ----------------------------------------------------------------------------- curves

@dataclass(frozen=True)
class QuarticCurve:
    """``y^2 = q(x)``; ``coeffs`` ascending, ``roots`` in cycle order."""

    coeffs: tuple
    roots: tuple

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[complex]) -> "QuarticCurve":
        coeffs = tuple(complex(c) for c in coeffs)
        if len(coeffs) != 5 or abs(coeffs[4]) == 0:
            raise ValueError("only quartic models are supported (leading coefficient must be nonzero)")
        roots = np.roots(coeffs[::-1])
        ordered = tuple(sorted((complex(r) for r in roots), key=lambda r: (round(r.real, 12), r.imag)))
        curve = cls(coeffs, ordered)
        curve.ensure_nondegenerate()
        return curve

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: complex = 1.0) -> "QuarticCurve":
        poly = np.poly(list(roots)) * leading
        return cls.from_coefficients(list(poly[::-1]))

    @property
    def leading(self) -> complex:
        return self.coeffs[4]

    @property
    def scale(self) -> float:
        return max(1.0, max(abs(r) for r in self.roots))

    def ensure_nondegenerate(self) -> None:
        for i in range(4):
            for j in range(i + 1, 4):
                if abs(self.roots[i] - self.roots[j]) <= COLLISION_RADIUS * self.scale:
                    raise DegenerateCurve("degenerate curve: colliding branch points")

    def q(self, x):
        return sum(c * x ** k for k, c in enumerate(self.coeffs))

    def dq(self, x):
        return sum(k * c * x ** (k - 1) for k, c in enumerate(self.coeffs) if k)

    def deformed(self, t: float) -> "QuarticCurve":
        """``q - t`` with roots matched to ``self`` by continuity."""
        coeffs = list(self.coeffs)
        coeffs[0] -= t
        new = [complex(r) for r in np.roots(coeffs[::-1])]
        best = min(permutations(new), key=lambda p: sum(abs(a - b) for a, b in zip(p, self.roots)))
        curve = QuarticCurve(tuple(coeffs), tuple(best))
        curve.ensure_nondegenerate()
        return curve


def parse_quartic(text: str) -> QuarticCurve:
    """Read ``"x^4-5x^2+4"``-style input."""
    import sympy
    from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication_application,
                                            parse_expr, standard_transformations)

    x = sympy.Symbol("x")
    try:
        expr = parse_expr(text, local_dict={"x": x},
                          transformations=standard_transformations
                          + (implicit_multiplication_application, convert_xor))
        poly = sympy.Poly(expr, x)
    except (sympy.SympifyError, SyntaxError, TypeError, sympy.PolynomialError) as exc:
        raise ValueError(f"cannot parse {text!r} as a polynomial in x") from exc
    coeffs = [complex(c) for c in reversed(poly.all_coeffs())]
    if len(coeffs) > 5:
        raise ValueError("only quartic models are supported")
    coeffs += [0j] * (5 - len(coeffs))
    return QuarticCurve.from_coefficients(coeffs)


# ----------------------------------------------------------------------------- segment integrals

def _rotated_sqrt(w: complex, direction: complex) -> complex:
    """Square root with its cut along the ray ``-direction * [0, inf)``."""
    return cmath.sqrt(direction) * cmath.sqrt(w / direction)


def _segment_parts(curve: QuarticCurve, i: int, j: int):
    """Parametrization ``x = m - h cos(theta)`` of ``[r_i, r_j]`` and the smooth factor of ``y``.

    On the segment ``y_+ = i h sin(theta) * root(theta)`` where ``root`` is
    ``sqrt(lead * prod_{other}(x - r))`` with cuts pointing away from the segment.
    """
    ra, rb = curve.roots[i], curve.roots[j]
    m, h = (ra + rb) / 2, (rb - ra) / 2
    others = [r for k, r in enumerate(curve.roots) if k not in (i, j)]
    dirs = [(m - r) / abs(m - r) for r in others]
    lead_root = cmath.sqrt(curve.leading)

    def x_of(theta):
        return m - h * math.cos(theta)

    def root(theta):
        x = x_of(theta)
        out = lead_root
        for r, d in zip(others, dirs):
            out *= _rotated_sqrt(x - r, d)
        return out

    return x_of, root, h


def _cquad(func: Callable[[float], complex], a: float, b: float) -> complex:
    with warnings.catch_warnings():
        # roundoff warnings only mean the requested 1e-13 was not reached; ``err`` is checked below
        warnings.simplefilter("ignore", IntegrationWarning)
        value, err = quad(func, a, b, complex_func=True, epsabs=1e-14, epsrel=1e-13, limit=400)
    if not np.isfinite(value) or abs(err) > 1e-9 * max(1.0, abs(value)):
        raise QuadratureError("quadrature did not converge")
    return value


def segment_holomorphic(curve: QuarticCurve, i: int, j: int, weight=None) -> complex:
    """``int_{r_i}^{r_j} f(x) dx / y_+`` for a function ``f`` of ``x`` (default 1)."""
    x_of, root, _h = _segment_parts(curve, i, j)
    if weight is None:
        return _cquad(lambda th: -1j / root(th), 0.0, math.pi)
    return _cquad(lambda th: -1j * weight(x_of(th)) / root(th), 0.0, math.pi)


def segment_action(curve: QuarticCurve, i: int, j: int) -> complex:
    """``int_{r_i}^{r_j} y_+ dx`` on the same branch as :func:`segment_holomorphic`."""
    _x_of, root, h = _segment_parts(curve, i, j)
    return _cquad(lambda th: 1j * h * h * math.sin(th) ** 2 * root(th), 0.0, math.pi)


A_SEGMENT = (2, 3)
B_SEGMENT = (1, 2)


@dataclass
class PeriodData:
    A: complex
    B: complex
    tau: complex
    action_a: complex  # oint_a y dx
    action_b: complex  # oint_b y dx
    sign_a: int
    sign_b: int

    @property
    def normalization(self) -> complex:
        """``omega_norm = dx / (A y)``."""
        return 1 / self.A


def compute_periods(curve: QuarticCurve, reference: PeriodData | None = None) -> PeriodData:
    """a- and b-periods of ``dx/y`` and ``y dx``.

    Without ``reference`` the a-orientation is the segment orientation and the
    b-orientation makes ``Im tau > 0``.  With ``reference`` both signs follow
    the reference by continuity, which is how a finite-difference stencil stays
    on fixed cycle classes.
    """
    a_raw = 2 * segment_holomorphic(curve, *A_SEGMENT)
    b_raw = 2 * segment_holomorphic(curve, *B_SEGMENT)
    if reference is None:
        sign_a = 1
        sign_b = 1 if (b_raw / a_raw).imag > 0 else -1
    else:
        sign_a = 1 if abs(a_raw - reference.A) <= abs(a_raw + reference.A) else -1
        sign_b = 1 if abs(b_raw - reference.B) <= abs(b_raw + reference.B) else -1
    A, B = sign_a * a_raw, sign_b * b_raw
    tau = B / A
    if tau.imag <= 0:
        raise DegenerateCurve("period matrix lost positivity; the stencil crossed a cut reconfiguration")
    pa = sign_a * 2 * segment_action(curve, *A_SEGMENT)
    pb = sign_b * 2 * segment_action(curve, *B_SEGMENT)
    return PeriodData(A, B, tau, pa, pb, sign_a, sign_b)


def a_period_of(curve: QuarticCurve, periods: PeriodData, weight) -> complex:
    """``oint_a f(x) dx/y`` with the orientation stored in ``periods``."""
    return periods.sign_a * 2 * segment_holomorphic(curve, *A_SEGMENT, weight=weight)


def b_period_of(curve: QuarticCurve, periods: PeriodData, weight) -> complex:
    return periods.sign_b * 2 * segment_holomorphic(curve, *B_SEGMENT, weight=weight)


# ----------------------------------------------------------------------------- loops

def _pair_root(x: complex, ra: complex, rb: complex) -> complex:
    """``sqrt((x - ra)(x - rb))``, continuous off the segment ``[ra, rb]``."""
    m, h = (ra + rb) / 2, (rb - ra) / 2
    w = x - m
    return w * cmath.sqrt(1 - (h / w) ** 2)


def loop_y(curve: QuarticCurve, x: complex) -> complex:
    r = curve.roots
    return cmath.sqrt(curve.leading) * _pair_root(x, r[0], r[1]) * _pair_root(x, r[2], r[3])


def a_loop(curve: QuarticCurve, nodes: int = 2048):
    """Trapezoid nodes on an ellipse around ``[r3, r4]`` avoiding ``r1, r2``."""
    r = curve.roots
    m, h = (r[2] + r[3]) / 2, (r[3] - r[2]) / 2
    gap = min(abs(r[k] - m) for k in (0, 1)) - abs(h)
    if gap <= 0:
        raise DegenerateCurve("no room for an a-loop")
    major = abs(h) + 0.5 * gap
    minor = 0.5 * gap
    u = h / abs(h)
    theta = np.linspace(0.0, 2 * math.pi, nodes, endpoint=False)
    xs = m + u * (major * np.cos(theta) + 1j * minor * np.sin(theta))
    dxs = u * (-major * np.sin(theta) + 1j * minor * np.cos(theta)) * (2 * math.pi / nodes)
    return xs, dxs


def loop_integral(values: np.ndarray, dxs: np.ndarray) -> complex:
    return complex(np.sum(values * dxs))


def loop_orientation(curve: QuarticCurve, periods: PeriodData, loop) -> int:
    """Sign turning the loop integral of ``dx/y`` into ``A``."""
    xs, dxs = loop
    value = loop_integral(np.array([1 / loop_y(curve, x) for x in xs]), dxs)
    sign = 1 if abs(value - periods.A) <= abs(value + periods.A) else -1
    if abs(sign * value - periods.A) > 1e-8 * abs(periods.A):
        raise QuadratureError("loop and segment a-periods disagree")
    return sign


# ----------------------------------------------------------------------------- local series at a branch point

def _ps_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    return np.convolve(a[:n], b[:n])[:n]


def _ps_inv(a: np.ndarray, n: int) -> np.ndarray:
    if a[0] == 0:
        raise ZeroDivisionError("series is not invertible")
    out = np.zeros(n, dtype=complex)
    out[0] = 1 / a[0]
    for k in range(1, n):
        out[k] = -np.dot(a[1:k + 1], out[k - 1::-1][:k]) / a[0]
    return out


def _ps_poly(coeffs: Sequence[complex], series: np.ndarray, n: int) -> np.ndarray:
    """``P(series)`` for a polynomial with ascending ``coeffs``."""
    out = np.zeros(n, dtype=complex)
    for c in reversed(coeffs):
        out = _ps_mul(out, series, n)
        out[0] += c
    return out


def branch_chart(curve: QuarticCurve, alpha: complex, n: int) -> np.ndarray:
    """Coefficients of ``x(s)`` near the root ``alpha`` with ``y = s``, through ``s^{n-1}``."""
    # q(alpha + xi) = P(xi); solve P(xi) = w for xi(w) with w = s^2
    shifted = np.polynomial.polynomial.Polynomial(curve.coeffs)(
        np.polynomial.polynomial.Polynomial([alpha, 1.0])).coef
    shifted = np.array(list(shifted) + [0] * 5, dtype=complex)[:5]
    slope = shifted[1]
    m = n // 2 + 1
    xi = np.zeros(m, dtype=complex)
    w = np.zeros(m, dtype=complex)
    if m > 1:
        w[1] = 1
    for _ in range(m):
        nonlinear = _ps_poly([0, 0] + list(shifted[2:]), xi, m)
        xi = (w - nonlinear) / slope
    x = np.zeros(n, dtype=complex)
    for k in range(m):
        if 2 * k < n:
            x[2 * k] = xi[k]
    x[0] = alpha
    return x


def _derivative(a: np.ndarray) -> np.ndarray:
    return np.append(a[1:] * np.arange(1, len(a)), 0)


def _coefficient(a: np.ndarray, k: int) -> complex:
    return complex(a[k]) if 0 <= k < len(a) else 0j


@dataclass
class ResidueReport:
    value: complex
    closed_form: complex
    contributions: list
    convergence: list = field(default_factory=list)

    @property
    def stable(self) -> bool:
        vals = [v for _n, v in self.convergence]
        return all(abs(a - b) <= 1e-9 * abs(b) for a, b in zip(vals, vals[1:]))


def cubic_residue_sum(curve: QuarticCurve, periods: PeriodData, n: int = 12) -> tuple[complex, list]:
    """``sum_alpha Res omega^3 / (dx dy)`` by local series in ``s = y``."""
    contributions = []
    for alpha in curve.roots:
        x = branch_chart(curve, alpha, n)
        dx = _derivative(x)
        # omega^3/(dx dy) = x'(s)^2 / (A^3 s^3) ds
        contributions.append(_coefficient(_ps_mul(dx, dx, n), 2) / periods.A ** 3)
    return sum(contributions), contributions


def dm_cubic_by_residue(curve: QuarticCurve, periods: PeriodData | None = None,
                        orders: Sequence[int] = (8, 12, 16)) -> ResidueReport:
    """``d tau / dz = -2 pi i (oint_bhat)^3 omega_{0,3} = 2 pi i sum_alpha Res omega^3/(dx dy)``.

    ``oint_bhat B = -omega`` turns each b-hat period of the Bergman kernel into
    the normalized holomorphic differential; the closed form
    ``(4 / A^3) sum 1/q'(alpha)^2`` is reported alongside.
    """
    periods = periods or compute_periods(curve)
    convergence = []
    contributions = []
    for n in orders:
        total, contributions = cubic_residue_sum(curve, periods, n)
        convergence.append((n, TWO_PI_I * total))
    closed = TWO_PI_I * 4 / periods.A ** 3 * sum(1 / curve.dq(r) ** 2 for r in curve.roots)
    return ResidueReport(convergence[-1][1], closed, contributions, convergence)


def _stencil(f: Callable[[float], complex], step: float) -> complex:
    """Fourth-order central difference at 0."""
    return (-f(2 * step) + 8 * f(step) - 8 * f(-step) + f(-2 * step)) / (12 * step)


@dataclass
class FiniteDifferenceReport:
    value: complex
    dtau_dt: complex
    dz_dt: complex
    step: float


def dm_cubic_by_finite_difference(curve: QuarticCurve, step: float = 1e-3,
                                  periods: PeriodData | None = None) -> FiniteDifferenceReport:
    """``(d tau/dt) / (dz/dt)`` for ``q_t = q - t`` with ``dz/dt = A/2``."""
    base = periods or compute_periods(curve)

    def tau(t):
        return compute_periods(curve.deformed(t), base).tau if t else base.tau

    dtau = _stencil(tau, step)
    dz = base.A / 2
    return FiniteDifferenceReport(dtau / dz, dtau, dz, step)


# ----------------------------------------------------------------------------- relat

@dataclass
class RelatReport:
    lhs: list
    rhs_printed: list
    rhs_derived: list
    residual_printed: float
    residual_derived: float


def relation_check_relat(curve: QuarticCurve, periods: PeriodData | None = None, n: int = 12) -> RelatReport:
    """``Res omega^2/du`` against ``-Res v oint_bhat oint_bhat omega_{0,3}`` per ramification point.

    Near ``alpha`` the double b-hat period of ``omega_{0,3}`` is
    ``Res_r omega(r)^2 B(r, p)/(dx dy)(r)``; only the principal part
    ``f_{-1} ds_p / s_p^2`` of the Bergman kernel contributes once multiplied by
    ``v = s_p``, where ``f = omega^2/(dx dy)``.  The printed relation carries a
    minus sign; ``rhs_derived`` drops it.
    """
    periods = periods or compute_periods(curve)
    lhs, rhs = [], []
    for alpha in curve.roots:
        x = branch_chart(curve, alpha, n)
        dx = _derivative(x)
        # omega^2/du = x'(s) / (A^2 s^2) ds
        lhs.append(_coefficient(dx, 1) / periods.A ** 2)
        # f = omega^2 / (dx dy) = x'(s) / (A^2 s^2); principal part f_{-1} / s_p^2
        f_minus_one = _coefficient(dx, 1) / periods.A ** 2
        rhs.append(f_minus_one)
    printed = [-r for r in rhs]
    scale = max(abs(v) for v in lhs)
    res_printed = max(abs(a - b) for a, b in zip(lhs, printed)) / scale
    res_derived = max(abs(a - b) for a, b in zip(lhs, rhs)) / scale
    return RelatReport(lhs, printed, rhs, res_printed, res_derived)


# ----------------------------------------------------------------------------- Bergman kernel

class BergmanKernel:
    """a-normalized Bergman kernel ``B = B_0 + c (dx/y)(dx/y)`` on ``y^2 = q(x)``.

    ``B_0 = (y1 y2 + F(x1, x2)/2) / (2 (x1 - x2)^2 y1 y2) dx1 dx2`` with
    ``F = sum_{i<=2} x1^i x2^i (2 c_{2i} + c_{2i+1} (x1 + x2))`` has the right
    double pole; ``c`` removes its a-period.
    """

    def __init__(self, curve: QuarticCurve, periods: PeriodData | None = None, probe: complex | None = None):
        self.curve = curve
        self.periods = periods or compute_periods(curve)
        probe = probe if probe is not None else self._default_probe()
        self.constant = -self._a_period_kernel(probe) / (4 * self.periods.A)

    def _default_probe(self) -> complex:
        r = self.curve.roots
        return (r[1] + r[2]) / 2 + 0.37j * abs(r[2] - r[1])

    def F(self, x1, x2):
        c = list(self.curve.coeffs) + [0j]
        return sum(x1 ** i * x2 ** i * (2 * c[2 * i] + c[2 * i + 1] * (x1 + x2)) for i in range(3))

    def _a_period_kernel(self, x2: complex) -> complex:
        """``oint_a F(x1, x2)/(x1 - x2)^2 dx1/y1``."""
        return a_period_of(self.curve, self.periods, lambda x1: self.F(x1, x2) / (x1 - x2) ** 2)

    def __call__(self, p: tuple, q: tuple) -> complex:
        """Coefficient of ``dx_p dx_q`` at points ``p = (x, y)``, ``q = (x, y)``."""
        (x1, y1), (x2, y2) = p, q
        b0 = (y1 * y2 + self.F(x1, x2) / 2) / (2 * (x1 - x2) ** 2 * y1 * y2)
        return b0 + self.constant / (y1 * y2)

    def constant_spread(self, probes: Sequence[complex]) -> float:
        values = [-self._a_period_kernel(x) / (4 * self.periods.A) for x in probes]
        return max(abs(v - self.constant) for v in values)

    def a_period(self, q: tuple, nodes: int = 2048) -> complex:
        """``oint_a B(., q)`` on an ellipse loop (independent of the segment route)."""
        loop = a_loop(self.curve, nodes)
        sign = loop_orientation(self.curve, self.periods, loop)
        xs, dxs = loop
        vals = np.array([self((x, loop_y(self.curve, x)), q) for x in xs])
        return sign * loop_integral(vals, dxs)

    def b_period_constant(self) -> complex:
        """``kappa`` with ``oint_b B(., p) = kappa dx_p/y_p``; Riemann bilinear predicts ``2 pi i / A``."""
        probe = self._default_probe()
        j = b_period_of(self.curve, self.periods, lambda x1: self.F(x1, probe) / (x1 - probe) ** 2)
        return j / 4 + self.constant * self.periods.B

    def double_pole_coefficient(self, p: tuple, delta: float = 1e-4) -> complex:
        x, y = p
        x2 = x + delta
        y2 = cmath.sqrt(self.curve.q(x2))
        if abs(y2 - y) > abs(y2 + y):
            y2 = -y2
        return delta ** 2 * self(p, (x2, y2))

    def local_pole_factor(self, alpha: complex, p: tuple) -> complex:
        """``beta_p = [s^{-1}] B(r, p)/dx_r`` as ``r -> alpha`` with ``y_r = s``."""
        xp, yp = p
        return (self.F(alpha, xp) / 2) / (2 * (alpha - xp) ** 2 * yp) + self.constant / yp

    def local_series(self, alpha: complex, p: tuple, n: int) -> np.ndarray:
        """``s * B(r, p)/dx_r`` as a power series in ``s = y_r`` near ``alpha``."""
        xp, yp = p
        x = branch_chart(self.curve, alpha, n)
        diff = -x.copy()
        diff[0] += xp  # x_p - x(s)
        inv_sq = _ps_inv(_ps_mul(diff, diff, n), n)
        coeffs = list(self.curve.coeffs) + [0j]
        # F(x(s), x_p) as a series
        f_series = np.zeros(n, dtype=complex)
        power = np.zeros(n, dtype=complex)
        power[0] = 1
        for i in range(3):
            term = (2 * coeffs[2 * i] + coeffs[2 * i + 1] * xp) * xp ** i
            f_series += term * power
            f_series += coeffs[2 * i + 1] * xp ** i * _ps_mul(power, x, n)
            power = _ps_mul(power, x, n)
        # s * [1/(2 d^2) + F/(4 d^2 yp s) + c/(yp s)]
        s_shift = np.zeros(n, dtype=complex)
        s_shift[1:] = (inv_sq / 2)[:-1]
        out = s_shift + _ps_mul(f_series, inv_sq, n) / (4 * yp)
        out[0] += self.constant / yp
        return out


def point_on_curve(curve: QuarticCurve, x: complex, near: complex | None = None) -> tuple:
    y = cmath.sqrt(curve.q(x))
    if near is not None and abs(y - near) > abs(y + near):
        y = -y
    return (x, y)


@dataclass
class RauchReport:
    fd: complex
    printed: complex
    derived: complex
    closed_form: complex
    residual_printed: float
    residual_derived: float
    symmetry: float
    a_period: float
    double_pole: float
    constant_spread: float


def rauch_rhs(kernel: BergmanKernel, p: tuple, q: tuple, n: int = 16) -> tuple[complex, complex]:
    """``sum_alpha Res omega B(., p) B(., q)/(dx dy)`` by series and in closed form."""
    total = 0j
    closed = 0j
    A = kernel.periods.A
    for alpha in kernel.curve.roots:
        x = branch_chart(kernel.curve, alpha, n)
        dx = _derivative(x)
        sp = kernel.local_series(alpha, p, n)
        sq = kernel.local_series(alpha, q, n)
        # integrand = x'(s)^2 (s b_p)(s b_q) / (A s^3) ds
        prod = _ps_mul(_ps_mul(dx, dx, n), _ps_mul(sp, sq, n), n)
        total += _coefficient(prod, 2) / A
        closed += 4 * kernel.local_pole_factor(alpha, p) * kernel.local_pole_factor(alpha, q) / (
            A * kernel.curve.dq(alpha) ** 2)
    return total, closed


def default_sample_points(curve: QuarticCurve) -> tuple:
    r = curve.roots
    spread = max(abs(r[3] - r[0]), 1.0)
    xp = (r[0] + r[1]) / 2 + 0.31j * spread
    xq = (r[2] + r[3]) / 2 - 0.23j * spread + 0.07 * spread
    return point_on_curve(curve, xp), point_on_curve(curve, xq)


def rauch_check(curve: QuarticCurve, step: float = 1e-3, points: tuple | None = None,
                guard: float = 1e-2) -> RauchReport:
    """``dB(p, q)/dz`` at fixed ``x(p), x(q)`` against the residue formula, both signs."""
    base = compute_periods(curve)
    kernel = BergmanKernel(curve, base)
    p, q = points or default_sample_points(curve)
    for pt in (p, q):
        if min(abs(pt[0] - r) for r in curve.roots) < guard * curve.scale:
            raise ValueError("sampled point too close to a ramification point")

    def value(t):
        if not t:
            return kernel(p, q)
        deformed = curve.deformed(t)
        k = BergmanKernel(deformed, compute_periods(deformed, base))
        pt = point_on_curve(deformed, p[0], p[1])
        qt = point_on_curve(deformed, q[0], q[1])
        return k(pt, qt)

    fd = _stencil(value, step) / (base.A / 2)
    derived, closed = rauch_rhs(kernel, p, q)
    printed = -derived
    scale = abs(derived)
    probes = [kernel._default_probe() + 0.2, kernel._default_probe() - 0.15j]
    return RauchReport(
        fd=fd, printed=printed, derived=derived, closed_form=closed,
        residual_printed=abs(fd - printed) / scale,
        residual_derived=abs(fd - derived) / scale,
        symmetry=abs(kernel(p, q) - kernel(q, p)),
        a_period=abs(kernel.a_period(q)),
        double_pole=abs(kernel.double_pole_coefficient(p) - 1),
        constant_spread=kernel.constant_spread(probes),
    )


# ----------------------------------------------------------------------------- theta series

@dataclass
class ThetaReport:
    a_period_error: float
    z_values: list
    residuals: list
    scaled_residuals: list
    orders: list
    prepotential_printed: complex
    prepotential_fd: complex
    tau: complex
    prepotential_printed_error: float
    prepotential_fd_error: float


def theta_a_period(curve: QuarticCurve, base: PeriodData, t: float, nodes: int = 2048) -> complex:
    """``oint_a (y_0 - y_t) dx`` by the trapezoid rule on an ellipse loop."""
    loop = a_loop(curve, nodes)
    sign = loop_orientation(curve, base, loop)
    deformed = curve.deformed(t)
    xs, dxs = loop
    vals = np.array([loop_y(curve, x) - loop_y(deformed, x) for x in xs])
    return sign * loop_integral(vals, dxs)


def z_coordinate(curve: QuarticCurve, base: PeriodData, t: float) -> complex:
    """``z(t) = int_0^t A(t')/2 dt'``."""
    def half_a(s):
        return compute_periods(curve.deformed(s), base).A / 2 if s else base.A / 2

    return _cquad(half_a, 0.0, t)


def theta_series_check(curve: QuarticCurve, t0: float = 0.08, shrinks: int = 3,
                       step: float = 1e-3) -> ThetaReport:
    """Two-term Taylor model of the b-period of ``theta`` and the prepotential.

    ``theta = (y_0 - y_t) dx``, ``z = oint_a theta`` and ``w = oint_b theta``.
    The model is ``w = z tau + z^2/2 d tau/dz``; the residual should shrink by
    ``8`` per halving of ``t``.  The printed prepotential's quadratic term gives
    ``d^2 F_0/dz^2 = -oint_bhat oint_bhat B``; the finite-difference route uses
    ``dF_0/dz = w``.
    """
    base = compute_periods(curve)
    dtau_dz = dm_cubic_by_residue(curve, base).value
    ts = [t0 / 2 ** k for k in range(shrinks + 1)]
    a_err = 0.0
    zs, residuals = [], []
    for t in ts:
        z = z_coordinate(curve, base, t)
        a_err = max(a_err, abs(theta_a_period(curve, base, t) - z))
        moved = compute_periods(curve.deformed(t), base)
        w = base.action_b - moved.action_b
        residuals.append(w - (z * base.tau + z * z / 2 * dtau_dz))
        zs.append(z)
    scaled = [abs(r) / abs(z) ** 3 for r, z in zip(residuals, zs)]
    orders = [math.log2(abs(residuals[k]) / abs(residuals[k + 1])) for k in range(shrinks)]
    kernel = BergmanKernel(curve, base)
    bb = kernel.b_period_constant() * base.B
    bhat_bhat = bb / (TWO_PI_I ** 2)  # (-1/(2 pi i))^2 oint_b oint_b B
    printed = -bhat_bhat

    def w_of(t):
        moved = compute_periods(curve.deformed(t), base) if t else base
        return base.action_b - moved.action_b

    fd = _stencil(w_of, step) / (base.A / 2)
    return ThetaReport(
        a_period_error=a_err, z_values=zs, residuals=residuals, scaled_residuals=scaled, orders=orders,
        prepotential_printed=printed, prepotential_fd=fd, tau=base.tau,
        prepotential_printed_error=abs(printed - base.tau) / abs(base.tau),
        prepotential_fd_error=abs(fd - base.tau) / abs(base.tau),
    )

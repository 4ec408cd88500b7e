"""Eynard-Orantin topological recursion on local spectral curves, in exact arithmetic.

Every ramification point ``alpha`` has a chart ``z`` with ``u = u(alpha) + z^2``,
so the deck involution is ``z -> -z``.  The Bergman kernel near ``(alpha, beta)`` is

    B(z1, z2) = [delta_ab / (z1 - z2)^2 + sum_{k,l} phi^{ab}_{kl} z1^k z2^l] dz1 dz2.

Correlators are stored on the basis differentials ``e^{(alpha, k)}``, ``k`` odd,
whose expansion at ``beta`` is ``delta_ab z^{-k-1} dz + (1/k) sum_l phi^{ba}_{l,k-1} z^l dz``;
they are the coefficients of ``k w^{k-1} dw`` when ``B(p, w)`` is expanded in ``w`` at ``alpha``.
A table entry ``W[L_1..L_n]`` is the coefficient of ``e^{L_1}(p_1) ... e^{L_n}(p_n)``
for every ordering of the labels.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from math import comb, prod
from typing import Dict, Hashable, Iterable, Mapping, Optional, Sequence, Tuple

import sympy

from .airy import SymmetryViolation
from .series import (BergmanCorrections, BivariateSeries, LaurentDifferential, Series,
                     TruncationError, rational_sqrt)
from .virasoro import double_factorial

Label = Tuple[Hashable, int]
Key = Tuple[Label, ...]

AIRY = "airy"
BESSEL = "bessel"


class CurveError(ValueError):
    pass


class DictionaryViolation(ValueError):
    def __init__(self, message: str = "dictionary violation"):
        super().__init__(message)


@dataclass(frozen=True)
class PointChart:
    label: Hashable
    v: Series
    kind: str = AIRY

    def __post_init__(self):
        lowest = self.v.odd_part().valuation()
        expected = 1 if self.kind == AIRY else -1
        if lowest is None:
            raise CurveError("degenerate denominator")
        if lowest != expected:
            raise CurveError("non-simple ramification")


@dataclass
class LocalSpectralCurve:
    points: list[PointChart]
    corrections: BergmanCorrections
    order: int
    name: str = "custom"

    def chart(self, alpha) -> PointChart:
        for p in self.points:
            if p.label == alpha:
                return p
        raise KeyError(alpha)

    @property
    def labels(self) -> list:
        return [p.label for p in self.points]


def builtin_airy(order: int = 40) -> LocalSpectralCurve:
    """``u = z^2``, ``v = z``, flat Bergman kernel."""
    if order < 4:
        raise ValueError("order must be at least 4")
    v = Series.from_terms({1: 1}, order)
    return LocalSpectralCurve([PointChart(0, v, AIRY)], BergmanCorrections.zero(order), order, "airy")


def builtin_bessel(order: int = 40) -> LocalSpectralCurve:
    """``u = z^2``, ``v = 1/z``, flat Bergman kernel."""
    if order < 4:
        raise ValueError("order must be at least 4")
    v = Series.from_terms({-1: 1}, order)
    return LocalSpectralCurve([PointChart(0, v, BESSEL)], BergmanCorrections.zero(order), order, "bessel")


def disjoint_union(curves: Sequence[LocalSpectralCurve], labels: Sequence) -> LocalSpectralCurve:
    """Several single-chart curves side by side, with no coupling in the Bergman kernel."""
    points = []
    order = min(c.order for c in curves)
    for curve, label in zip(curves, labels):
        if len(curve.points) != 1 or not curve.corrections.is_zero():
            raise ValueError("only flat single-chart curves can be juxtaposed")
        p = curve.points[0]
        points.append(PointChart(label, p.v, p.kind))
    return LocalSpectralCurve(points, BergmanCorrections.zero(order), order, "disjoint")


# ----------------------------------------------------------------------------- global rational curves

def _parse(expr) -> sympy.Expr:
    z = sympy.Symbol("z")
    if isinstance(expr, str):
        expr = sympy.sympify(expr.replace("^", "**"), locals={"z": z}, rational=True)
    extra = expr.free_symbols - {z}
    if extra:
        raise CurveError(f"unknown symbols {sorted(map(str, extra))}; use z")
    return sympy.together(expr)


def _coefficients(poly_expr, z) -> list[Fraction]:
    poly = sympy.Poly(poly_expr, z)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return coeffs


def _taylor(num: list[Fraction], den: list[Fraction], at: Fraction, order: int) -> Series:
    """Expansion of ``num/den`` at ``z = at`` in ``t = z - at``."""
    def shifted(coeffs):
        out = [Fraction(0)] * len(coeffs)
        for power, c in enumerate(coeffs):
            for j in range(power + 1):
                out[j] += c * comb(power, j) * at ** (power - j)
        return Series.from_terms(dict(enumerate(out)), order)

    d = shifted(den)
    if d[0] == 0:
        raise CurveError("pole at a critical point")
    return shifted(num) / d


def from_global_rational(u, v, order: int = 24) -> LocalSpectralCurve:
    """Local charts of a genus-zero curve ``(u(z), v(z))`` given by rational functions.

    When ``u''/2`` at a critical point is minus a rational square the chart is
    built for the pair ``(-u, -v)``, which leaves the recursion kernel unchanged.
    """
    z = sympy.Symbol("z")
    u_expr, v_expr = _parse(u), _parse(v)
    u_num, u_den = sympy.fraction(u_expr)
    v_num, v_den = sympy.fraction(v_expr)
    crit = sympy.Poly(sympy.expand(sympy.diff(u_num, z) * u_den - u_num * sympy.diff(u_den, z)), z)
    if crit.is_zero:
        raise CurveError("u is constant")
    factors = sympy.factor_list(crit)[1]
    roots = []
    for factor, mult in factors:
        if factor.degree() != 1:
            raise CurveError("non-rational critical point")
        if mult > 1:
            raise CurveError("non-simple ramification")
        a, b = factor.all_coeffs()
        roots.append(Fraction(-sympy.Rational(b) / sympy.Rational(a)))
    w = sympy.Symbol("w")
    u_inf = sympy.limit(u_expr, z, sympy.oo)
    if u_inf.is_finite:
        slope = sympy.limit(sympy.together(u_expr.subs(z, 1 / w) - u_inf) / w, w, 0)
        if slope == 0:
            raise CurveError("critical point at infinity is not supported")
    un, ud = _coefficients(u_num, z), _coefficients(u_den, z)
    vn, vd = _coefficients(v_num, z), _coefficients(v_den, z)
    if not roots:
        raise CurveError("u has no critical points")
    roots.sort()
    charts = []
    coords = []
    for index, alpha in enumerate(roots):
        work = order + 8
        u_loc = _taylor(un, ud, alpha, work)
        v_loc = _taylor(vn, vd, alpha, work)
        kappa = u_loc[2]
        sign = 1
        root = rational_sqrt(kappa) if kappa > 0 else None
        if root is None and kappa < 0:
            root = rational_sqrt(-kappa)
            sign = -1
        if root is None:
            raise CurveError("non-square normalization; use the numeric module for this curve")
        # z(t) = root * t * sqrt(f(t)),  f = sign * (u - u(alpha)) / (root^2 t^2)
        f = (u_loc - u_loc[0]).scale(Fraction(sign) / (root * root)).shift(-2)
        z_of_t = f.sqrt().shift(1).scale(root)
        t_of_z = z_of_t.reversion()
        v_chart = v_loc.compose(t_of_z).scale(sign).truncate(order)
        check = (u_loc - u_loc[0]).scale(sign).compose(t_of_z)
        for e in range(0, min(check.order, order) + 1):
            if check[e] != (1 if e == 2 else 0):
                raise ArithmeticError("chart normalization failed")
        charts.append(PointChart(index, v_chart, AIRY))
        coords.append((alpha, t_of_z))
    corrections = _global_corrections(coords, order)
    return LocalSpectralCurve(charts, corrections, order, "global-rational")


def _global_corrections(coords, order: int) -> BergmanCorrections:
    """``phi`` from ``dzeta1 dzeta2 / (zeta1 - zeta2)^2`` with ``zeta = alpha + t(z)``."""
    entries = {}
    work = order + 4
    for a, (alpha, ta) in enumerate(coords):
        dta = ta.derivative()
        for b, (beta, tb) in enumerate(coords):
            dtb = tb.derivative()
            num = BivariateSeries.from_product(dta.truncate(work), dtb.truncate(work), work)
            if a == b:
                diff = BivariateSeries.from_product(ta.truncate(work), Series.one(work), work) - \
                    BivariateSeries.from_product(Series.one(work), ta.truncate(work), work)
                g = diff.divide_by_difference()
                top = num - g * g
                quotient = top.divide_by_difference().divide_by_difference()
                regular = quotient * (g * g).inverse()
            else:
                diff = BivariateSeries.from_product(ta.truncate(work), Series.one(work), work) - \
                    BivariateSeries.from_product(Series.one(work), tb.truncate(work), work) + \
                    BivariateSeries({(0, 0): alpha - beta}, work)
                inv = diff.inverse()
                regular = num * inv * inv
            if regular.order < order:
                raise TruncationError("truncation exhausted while expanding the Bergman kernel")
            for (k, l), c in regular.coeffs.items():
                if k + l <= order:
                    entries[(a, b, k, l)] = c
    return BergmanCorrections(entries, order)


# ----------------------------------------------------------------------------- basis and kernel

@dataclass
class BasisDifferential:
    label: Label
    expansions: Dict[Hashable, LaurentDifferential]


def _tail(curve: LocalSpectralCurve, at, label: Label, upto: int) -> Dict[int, Fraction]:
    gamma, k = label
    if curve.corrections.is_zero():
        return {}
    out = {}
    for l in range(upto + 1):
        c = curve.corrections.get(at, gamma, l, k - 1)
        if c:
            out[l] = c / k
    return out


def expansion_series(curve: LocalSpectralCurve, at, label: Label, order: int) -> Series:
    """Coefficient of ``dz`` in the expansion of ``e^label`` at ``at``, known to ``z^order``."""
    gamma, k = label
    terms = _tail(curve, at, label, order)
    if gamma == at:
        terms[-k - 1] = Fraction(1)
    return Series.from_terms(terms, order, low=min([-k - 1] + list(terms)) if terms else order + 1)


def basis_expansion(curve: LocalSpectralCurve, alpha, k: int, order: int | None = None) -> BasisDifferential:
    """``e^{(alpha, k)}`` at every chart, as ``S(z) dz/z`` differentials."""
    if k < 1:
        raise ValueError("k must be at least 1")
    order = curve.corrections.order - k + 1 if order is None else order
    if order < 1:
        raise TruncationError("truncation exhausted for this basis element")
    out = {}
    for beta in curve.labels:
        out[beta] = LaurentDifferential(expansion_series(curve, beta, (alpha, k), order - 1).shift(1))
    return BasisDifferential((alpha, k), out)



def kernel_denominator(chart: PointChart) -> Series:
    """``Q(z)`` with ``(v(z) - v(-z)) du = Q(z) dz``, that is ``Q = 4 z v_odd(z)``."""
    odd = chart.v.odd_part()
    if odd.valuation() is None:
        raise CurveError("degenerate denominator")
    return odd.shift(1).scale(4)


@dataclass
class KernelExpansion:
    alpha: Hashable
    denominator: Series
    coefficients: Dict[int, Series]  # odd k -> series c_k(z); K = sum_k e^{(alpha,k)}(p1) c_k(z) / dz


def kernel_expansion(curve: LocalSpectralCurve, alpha, max_k: int) -> KernelExpansion:
    """``K(p1, z) = -1/2 int_{-z}^{z} B(p1, .) / ((v(z) - v(-z)) du(z))``.

    Only odd ``k`` survive the integral from ``-z`` to ``z``, giving
    ``K = -sum_{k odd} e^{(alpha,k)}(p1) z^k / (Q(z) dz)``.
    """
    q = kernel_denominator(curve.chart(alpha))
    inv = q.inverse()
    coeffs = {k: inv.shift(k).scale(-1) for k in range(1, max_k + 1, 2)}
    return KernelExpansion(alpha, q, coeffs)


# ----------------------------------------------------------------------------- correlators

def pole_bound(h: int, n: int) -> int:
    return 2 * (3 * h - 3 + n) + 2


def _sort_key(label):
    return (str(label[0]), label[1])


def _key(labels: Iterable[Label]) -> Key:
    return tuple(sorted(labels, key=_sort_key))


def _remove(key: Key, label: Label) -> Key:
    i = key.index(label)
    return key[:i] + key[i + 1:]


class CorrelatorTable:
    def __init__(self, curve: LocalSpectralCurve, chi_max: int, max_dim: int | None = None):
        self.curve = curve
        self.chi_max = chi_max
        self.max_dim = max_dim
        self.sectors: Dict[Tuple[int, int], Dict[Key, Fraction]] = {}

    def get(self, h: int, labels) -> Fraction:
        n = len(labels)
        if (h, n) not in self.sectors:
            raise KeyError(f"sector {(h, n)} was not computed")
        return self.sectors[(h, n)].get(_key(labels), Fraction(0))

    def items(self):
        return self.sectors.items()


def _sub_multisets(key: Key):
    counts: Dict[Label, int] = {}
    for l in key:
        counts[l] = counts.get(l, 0) + 1
    labels = list(counts)
    for choice in cartesian(*(range(counts[l] + 1) for l in labels)):
        left, right, weight = [], [], 1
        for l, m in zip(labels, choice):
            left += [l] * m
            right += [l] * (counts[l] - m)
            weight *= comb(counts[l], m)
        yield tuple(left), tuple(right), weight


def compute_correlators(curve: LocalSpectralCurve, chi_max: int, max_dim: int | None = None,
                        kernel_factor: Fraction | int = 1) -> CorrelatorTable:
    """All ``omega_{h,n}`` with ``2h - 2 + n <= chi_max`` (and ``3h - 3 + n <= max_dim``).

    ``kernel_factor`` multiplies the recursion kernel; anything but 1 is a
    deliberate mutation used to exercise the cross-validation failure path.
    """
    if chi_max < 1:
        raise ValueError("chi_max must be at least 1")
    kernel_factor = Fraction(kernel_factor)
    table = CorrelatorTable(curve, chi_max, max_dim)
    charts = {p.label: p for p in curve.points}
    inv_q = {}
    q_val = {}
    for alpha, chart in charts.items():
        q = kernel_denominator(chart)
        q_val[alpha] = q.valuation()
        inv_q[alpha] = q.inverse()
    slot_index: Dict[Tuple[int, int], Dict[Key, list]] = {}
    pair_index: Dict[Tuple[int, int], Dict[Key, list]] = {}
    expansion_cache: Dict = {}
    slot_cache: Dict = {}

    def expansion(label, alpha, order):
        ck = (label, alpha, order)
        if ck not in expansion_cache:
            expansion_cache[ck] = expansion_series(curve, alpha, label, order)
        return expansion_cache[ck]

    def index_sector(h, n):
        slots: Dict[Key, list] = defaultdict(list)
        pairs: Dict[Key, list] = defaultdict(list)
        for key, w in table.sectors[(h, n)].items():
            for l1 in set(key):
                rest = _remove(key, l1)
                slots[rest].append((l1, w))
                for l2 in set(rest):
                    pairs[_remove(rest, l2)].append((l1, l2, w))
        slot_index[(h, n)] = slots
        pair_index[(h, n)] = pairs

    def one_slot(h, sub: Key, alpha, order) -> Optional[Series]:
        """``omega_{h,|sub|+1}(z, sub)`` near ``alpha`` as a coefficient of ``dz``."""
        if h == 0 and len(sub) == 0:
            return None
        ck = (h, sub, alpha, order)
        if ck in slot_cache:
            return slot_cache[ck]
        if h == 0 and len(sub) == 1:
            gamma, k = sub[0]
            result = Series.from_terms({k - 1: k}, order) if gamma == alpha else None
        else:
            entries = slot_index.get((h, len(sub) + 1), {}).get(sub)
            result = None
            for label, w in entries or ():
                term = expansion(label, alpha, order).scale(w)
                result = term if result is None else result + term
        slot_cache[ck] = result
        return result

    for chi in range(1, chi_max + 1):
        for h in range(0, chi // 2 + 2):
            big_n = chi - 2 * h + 2
            if big_n < 1 or (h == 0 and big_n < 3):
                continue
            if max_dim is not None and 3 * h - 3 + big_n > max_dim:
                continue
            n = big_n - 1
            bound = pole_bound(h, big_n)
            window = bound + 1 if bound % 2 == 0 else bound + 2
            window_labels = [(a, k) for a in charts for k in range(1, window + 1, 2)]
            sector: Dict[Key, Fraction] = {}
            computed: Dict[Tuple[Label, Key], Fraction] = {}
            # candidate S (labels of p_2..p_n), from supports of the lower sectors
            candidates: set = set()
            if h >= 1 and (h - 1, big_n + 1) in pair_index:
                candidates |= set(pair_index[(h - 1, big_n + 1)])
            if h == 1 and big_n == 1:
                candidates.add(())
            for h1 in range(0, h + 1):
                for n1 in range(0, n + 1):
                    h2, n2 = h - h1, n - n1
                    left = _slot_keys(slot_index, h1, n1, window_labels)
                    right = _slot_keys(slot_index, h2, n2, window_labels)
                    if left is None or right is None:
                        continue
                    for s1 in left:
                        for s2 in right:
                            candidates.add(_key(s1 + s2))
            for s_key in sorted(candidates, key=lambda k: [_sort_key(l) for l in k]):
                for alpha in charts:
                    r_order = q_val[alpha] - 2
                    e_order = r_order + window + 3
                    r = Series.zero(r_order)
                    touched = False
                    # omega_{h-1,n+1}(z, -z, S)
                    if h >= 1:
                        if (h - 1, big_n + 1) == (0, 2):
                            r = r + _self_bergman(curve, alpha, r_order)
                            touched = True
                        else:
                            for l1, l2, w in pair_index.get((h - 1, big_n + 1), {}).get(s_key, ()):
                                f1 = expansion(l1, alpha, e_order)
                                f2 = expansion(l2, alpha, e_order).reflect().scale(-w)
                                r = r + _clip(f1 * f2, r_order)
                                touched = True
                    # sum over splits, omega_{0,1} excluded
                    for s1, s2, weight in _sub_multisets(s_key):
                        for h1 in range(0, h + 1):
                            f1 = one_slot(h1, s1, alpha, e_order)
                            if f1 is None:
                                continue
                            f2 = one_slot(h - h1, s2, alpha, e_order)
                            if f2 is None:
                                continue
                            r = r + _clip(f1 * f2.reflect().scale(-weight), r_order)
                            touched = True
                    if not touched or r.is_zero():
                        continue
                    quotient = r * inv_q[alpha]
                    if quotient.order < -2:
                        raise TruncationError(
                            f"truncation exhausted at (h,n)={(h, big_n)}: "
                            f"increase the curve order by at least {-2 - quotient.order}")
                    for k in range(1, window + 1, 2):
                        value = -quotient[-1 - k] * kernel_factor
                        if not value:
                            continue
                        if k > bound:
                            raise ArithmeticError(
                                f"pole bound violated in omega_{(h, big_n)} at label {(alpha, k)}")
                        computed[((alpha, k), s_key)] = value
                        sector[_key(((alpha, k),) + s_key)] = value
            # the recursion singles out p_1; every other choice of first slot must agree
            for full, value in sector.items():
                for label in set(full):
                    other = computed.get((label, _remove(full, label)), Fraction(0))
                    if other != value:
                        raise SymmetryViolation(
                            f"symmetry violation in omega_{(h, big_n)} at {full}: {value} != {other}")
            table.sectors[(h, big_n)] = sector
            index_sector(h, big_n)
    return table


def _clip(s: Series, order: int) -> Series:
    return s.truncate(order) if s.order > order else s


def _slot_keys(slot_index, h, n_sub, window_labels):
    """Label tuples ``S`` for which ``omega_{h, n_sub + 1}(z, S)`` can be nonzero."""
    if h == 0 and n_sub == 0:
        return None
    if h == 0 and n_sub == 1:
        return [(l,) for l in window_labels]
    idx = slot_index.get((h, n_sub + 1))
    if idx is None:
        return None
    return list(idx)


def _self_bergman(curve: LocalSpectralCurve, alpha, order: int) -> Series:
    """``B(z, -z)`` as a coefficient of ``dz^2``: ``-[1/(4 z^2) + sum phi_kl (-1)^l z^{k+l}]``."""
    terms: Dict[int, Fraction] = {-2: Fraction(-1, 4)}
    if not curve.corrections.is_zero():
        for total in range(0, order + 1):
            for k in range(total + 1):
                l = total - k
                c = curve.corrections.get(alpha, alpha, k, l)
                if c:
                    terms[total] = terms.get(total, Fraction(0)) - c * (-1) ** l
    return Series.from_terms(terms, order)


# ----------------------------------------------------------------------------- invariants

def primitive(curve: LocalSpectralCurve, alpha, shift: Series | None = None) -> Series:
    """``psi`` with ``d psi = v du = 2 z v(z) dz``; ``shift`` adds an even function of ``z``."""
    v = curve.chart(alpha).v
    psi = (v.shift(1).scale(2)).integrate()
    if shift is not None:
        if not shift.odd_part().is_zero():
            raise ValueError("the shift must be a function of u = z^2")
        psi = psi + shift
    return psi


def _psi_pairing(curve: LocalSpectralCurve, label: Label, shifts=None) -> Fraction:
    """``sum_alpha Res_alpha psi e^label``; only the principal part at the label's own point contributes."""
    alpha, k = label
    psi = primitive(curve, alpha, (shifts or {}).get(alpha))
    if psi.low < 0:
        raise ValueError("primitive must be holomorphic at the ramification point")
    return psi[k]


def dilaton_check(table: CorrelatorTable, h: int, n: int, shifts=None) -> bool:
    """``sum_alpha Res psi omega_{h,n+1}(., S) = (2h - 2 + n) omega_{h,n}(S)`` for every ``S``."""
    if (h, n + 1) not in table.sectors:
        raise TruncationError(f"omega_{(h, n + 1)} is not in the table")
    if (h, n) not in table.sectors:
        raise TruncationError(f"omega_{(h, n)} is not in the table")
    lhs: Dict[Key, Fraction] = defaultdict(Fraction)
    for key, w in table.sectors[(h, n + 1)].items():
        for label in set(key):
            lhs[_remove(key, label)] += w * _psi_pairing(table.curve, label, shifts)
    factor = 2 * h - 2 + n
    rhs = table.sectors[(h, n)]
    for key in set(lhs) | set(rhs):
        if lhs.get(key, 0) != factor * rhs.get(key, 0):
            return False
    return True


def free_energy(table: CorrelatorTable, h: int, shifts=None) -> Fraction:
    """``F_h = 1/(2h - 2) sum_alpha Res psi omega_{h,1}``."""
    if h < 2:
        raise ValueError("undefined for h<2 in this artifact")
    if (h, 1) not in table.sectors:
        raise TruncationError(f"omega_{(h, 1)} is not in the table")
    total = sum((w * _psi_pairing(table.curve, key[0], shifts)
                 for key, w in table.sectors[(h, 1)].items()), Fraction(0))
    return total / (2 * h - 2)


@dataclass
class InvariantReport:
    passed: bool
    problems: list = field(default_factory=list)


def check_invariants(table: CorrelatorTable) -> InvariantReport:
    """Slot symmetry, zero residues, parity, pole bound and the dilaton equation."""
    problems = []
    for (h, n), sector in table.sectors.items():
        bound = pole_bound(h, n)
        for key in sector:
            for alpha, k in key:
                if k < 1:
                    problems.append(("residue", (h, n), key))
                if k % 2 == 0:
                    problems.append(("parity", (h, n), key))
                if k > bound:
                    problems.append(("pole bound", (h, n), key))
        if not _fully_symmetric(sector):
            problems.append(("symmetry", (h, n), None))
    for (h, n1) in table.sectors:
        n = n1 - 1
        if n >= 1 and (h, n) in table.sectors:
            if not dilaton_check(table, h, n):
                problems.append(("dilaton", (h, n), None))
    return InvariantReport(not problems, problems)


def _fully_symmetric(sector: Mapping[Key, Fraction]) -> bool:
    # keys are canonical sorted tuples, so symmetry reduces to canonical storage
    return all(_key(k) == k for k in sector)


def residue_free(table: CorrelatorTable, h: int, n: int) -> bool:
    """Each stored entry multiplies residue-free basis elements, so every residue vanishes."""
    for key in table.sectors[(h, n)]:
        for alpha, k in key:
            basis = basis_expansion(table.curve, alpha, k, order=max(k + 2, 2))
            for beta, d in basis.expansions.items():
                if d.series.low <= 0 <= d.series.order and d.series[0] != 0:
                    return False
    return True


def intersection_numbers(table: CorrelatorTable) -> Dict[Tuple[int, Tuple[int, ...]], Fraction]:
    """``<tau_{k_1} .. tau_{k_n}>_h = 2^{2h-2+n} omega[(a, 2k_i+1)] / prod (2k_i+1)!!``.

    The power of two is the single constant that makes ``<tau_0^3>_0 = 1``.
    """
    out = {}
    points = {p.label for p in table.curve.points}
    if len(points) != 1:
        raise DictionaryViolation("dictionary violation: intersection numbers need a single Airy chart")
    for (h, n), sector in table.sectors.items():
        for key, w in sector.items():
            if any(k % 2 == 0 for _a, k in key):
                raise DictionaryViolation()
            ks = tuple(sorted((k - 1) // 2 for _a, k in key))
            factor = Fraction(2) ** (2 * h - 2 + n)
            out[(h, ks)] = w * factor / prod(double_factorial(k) for _a, k in key)
    return out


@dataclass
class ComparisonReport:
    passed: bool
    compared: int
    mismatches: list = field(default_factory=list)


def compare_with_abstract_tr(table: CorrelatorTable, tr_table, label_map=None) -> ComparisonReport:
    """``omega_{h,n;I} = 2^{-(2h-2+n)} S_{h,n;I}`` entrywise, where ``S`` is the abstract-TR tensor.

    ``label_map`` sends a correlator label ``(alpha, k)`` to a mode label; by
    default a single-chart curve maps ``(alpha, k) -> k`` and multi-chart
    curves map it to itself.
    """
    if label_map is None:
        single = len(table.curve.points) == 1
        label_map = (lambda l: l[1]) if single else (lambda l: l)
    compared = 0
    mismatches = []
    modes = set(tr_table.structure.modes)
    for (h, n), sector in sorted(table.sectors.items()):
        if (h, n) not in tr_table.entries:
            continue
        factor = Fraction(2) ** (2 * h - 2 + n)
        seen = set()
        for key, w in sector.items():
            mapped = tuple(label_map(l) for l in key)
            if not set(mapped) <= modes:
                raise DictionaryViolation(f"dictionary misalignment: {mapped} not in the mode set")
            seen.add(tuple(sorted(mapped, key=str)))
            compared += 1
            other = tr_table.get(h, mapped)
            if w * factor != other:
                mismatches.append(((h, n), key, w * factor, other))
        for mapped, value in tr_table.entries[(h, n)].items():
            if tuple(sorted(mapped, key=str)) not in seen and value:
                compared += 1
                mismatches.append(((h, n), mapped, Fraction(0), value))
    return ComparisonReport(not mismatches, compared, mismatches)

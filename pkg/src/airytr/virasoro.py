"""Virasoro constraints for the Kontsevich-Witten and Brezin-Gross-Witten tau functions.

Polynomials live in ``Q[hbar, hbar^-1][x^1, x^3, x^5, ...]``.  A monomial in the
odd variables is a sorted tuple of variable labels with repetition, so
``(1, 1, 3)`` is ``(x^1)^2 x^3``.

The operators, for the two variants, are

    KW,  m >= -1:  L_m = -1/2 d/dx^{2m+3} + hbar/4 sum_{i+j=2m} d_i d_j
                         + 1/2 sum_i i x^i d/dx^{i+2m} + delta_{m,0}/16 + delta_{m,-1} (x^1)^2/(4 hbar)
    BGW, m >= 0:   L_m = -1/2 d/dx^{2m+1} + hbar/4 sum_{i+j=2m} d_i d_j
                         + 1/2 sum_i i x^i d/dx^{i+2m} + delta_{m,0}/16

with all indices odd and positive.  The free energy is stored as
``log Z = sum_h hbar^{h-1} S_h`` and ``S_{h,n}`` is the degree-n part of ``S_h``.
Graded weight of ``x^{2k+1}`` is ``k + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Dict, Iterator, Mapping, Tuple

Monomial = Tuple[int, ...]
Key = Tuple[Monomial, int]  # (monomial, hbar power)

KW = "kw"
BGW = "bgw"
VARIANTS = (KW, BGW)


class InconsistentSystem(ArithmeticError):
    def __init__(self, message: str = "inconsistent system"):
        super().__init__(message)


class CutoffOverflow(ValueError):
    pass


def variable_weight(label: int) -> int:
    return (label + 1) // 2


def monomial_weight(monomial: Monomial) -> int:
    return sum(variable_weight(v) for v in monomial)


def _insert(monomial: Monomial, label: int) -> Monomial:
    return tuple(sorted(monomial + (label,)))


def _remove_one(monomial: Monomial, label: int) -> Monomial:
    i = monomial.index(label)
    return monomial[:i] + monomial[i + 1:]


def _merge(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def double_factorial(n: int) -> int:
    return prod(range(n, 0, -2)) if n > 0 else 1


def multiplicity_factor(monomial: Monomial) -> int:
    """``prod mult!``: converts a monomial coefficient to a symmetric-tensor entry."""
    out = 1
    for label in set(monomial):
        out *= factorial(monomial.count(label))
    return out


class FockPolynomial:
    """Sparse polynomial in hbar^{+-1} and the odd variables with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, Fraction] | None = None):
        self.terms: Dict[Key, Fraction] = {}
        for key, c in (terms or {}).items():
            if c:
                if any(v % 2 == 0 or v < 1 for v in key[0]):
                    raise ValueError("only odd positive variable labels are allowed")
                self.terms[(tuple(sorted(key[0])), key[1])] = Fraction(c)

    @classmethod
    def constant(cls, c, hbar_power: int = 0) -> "FockPolynomial":
        return cls({((), hbar_power): Fraction(c)})

    def copy(self) -> "FockPolynomial":
        return FockPolynomial(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FockPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        items = sorted(self.terms.items(), key=lambda kv: (kv[0][1], len(kv[0][0]), kv[0][0]))
        return "FockPolynomial(" + ", ".join(f"{c}*h^{p}*x{m}" for (m, p), c in items) + ")"

    def _accumulate(self, out: Dict[Key, Fraction], key: Key, c: Fraction) -> None:
        value = out.get(key, Fraction(0)) + c
        if value:
            out[key] = value
        else:
            out.pop(key, None)

    def __add__(self, other: "FockPolynomial") -> "FockPolynomial":
        out = dict(self.terms)
        for key, c in other.terms.items():
            self._accumulate(out, key, c)
        return FockPolynomial(out)

    def __sub__(self, other: "FockPolynomial") -> "FockPolynomial":
        return self + other.scale(-1)

    def scale(self, factor) -> "FockPolynomial":
        factor = Fraction(factor)
        return FockPolynomial({k: c * factor for k, c in self.terms.items()})

    def __mul__(self, other: "FockPolynomial") -> "FockPolynomial":
        out: Dict[Key, Fraction] = {}
        for (ma, pa), ca in self.terms.items():
            for (mb, pb), cb in other.terms.items():
                self._accumulate(out, (_merge(ma, mb), pa + pb), ca * cb)
        return FockPolynomial(out)

    def derivative(self, label: int) -> "FockPolynomial":
        out: Dict[Key, Fraction] = {}
        for (m, p), c in self.terms.items():
            mult = m.count(label)
            if mult:
                self._accumulate(out, (_remove_one(m, label), p), c * mult)
        return FockPolynomial(out)

    def times_variable(self, label: int, factor=1) -> "FockPolynomial":
        factor = Fraction(factor)
        return FockPolynomial({(_insert(m, label), p): c * factor for (m, p), c in self.terms.items()})

    def shift_hbar(self, k: int) -> "FockPolynomial":
        return FockPolynomial({(m, p + k): c for (m, p), c in self.terms.items()})

    def variables(self) -> set[int]:
        return {v for (m, _), _c in self.terms.items() for v in m}


@dataclass(frozen=True)
class VirasoroOperator:
    variant: str
    m: int

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        lowest = -1 if self.variant == KW else 0
        if self.m < lowest:
            raise ValueError(f"L_{self.m} is not defined for {self.variant}")

    @property
    def derivative_label(self) -> int:
        return 2 * self.m + 3 if self.variant == KW else 2 * self.m + 1

    def quadratic_pairs(self) -> Iterator[Tuple[int, int]]:
        """Ordered pairs of odd labels with i + j = 2m."""
        for i in range(1, 2 * self.m, 2):
            yield i, 2 * self.m - i

    def constant(self) -> Fraction:
        return Fraction(1, 16) if self.m == 0 else Fraction(0)

    def apply(self, poly: FockPolynomial) -> FockPolynomial:
        """Act linearly on ``poly`` (as on a partition function, not on its logarithm)."""
        out = poly.derivative(self.derivative_label).scale(Fraction(-1, 2))
        for i, j in self.quadratic_pairs():
            out = out + poly.derivative(i).derivative(j).shift_hbar(1).scale(Fraction(1, 4))
        out = out + _euler_like(poly, 2 * self.m)
        if self.m == 0:
            out = out + poly.scale(Fraction(1, 16))
        if self.variant == KW and self.m == -1:
            out = out + poly.times_variable(1).times_variable(1).shift_hbar(-1).scale(Fraction(1, 4))
        return out


def _euler_like(poly: FockPolynomial, shift: int) -> FockPolynomial:
    """``1/2 sum_i i x^i d/dx^{i+shift}`` over odd ``i >= 1``."""
    out = FockPolynomial()
    for label in sorted(poly.variables()):
        i = label - shift
        if i >= 1:
            out = out + poly.derivative(label).times_variable(i, Fraction(i, 2))
    return out


def apply_virasoro(op: VirasoroOperator, log_z: FockPolynomial) -> FockPolynomial:
    """Residual ``exp(-S) L_m exp(S)`` for ``S = log_z``."""
    out = log_z.derivative(op.derivative_label).scale(Fraction(-1, 2))
    for i, j in op.quadratic_pairs():
        di = log_z.derivative(i)
        second = log_z.derivative(i).derivative(j) + di * log_z.derivative(j)
        out = out + second.shift_hbar(1).scale(Fraction(1, 4))
    out = out + _euler_like(log_z, 2 * op.m)
    if op.m == 0:
        out = out + FockPolynomial.constant(Fraction(1, 16))
    if op.variant == KW and op.m == -1:
        out = out + FockPolynomial({((1, 1), -1): Fraction(1, 4)})
    return out


def sector_weight(variant: str, h: int, n: int) -> int:
    """Graded weight of every monomial of ``S_{h,n}``."""
    return 3 * h - 3 + 2 * n if variant == KW else h - 1 + n


def max_label(variant: str, h: int, n: int) -> int:
    """Largest variable label that can occur in ``S_{h,n}``."""
    top = 3 * h - 3 + n if variant == KW else h - 1
    return 2 * max(top, 0) + 1


def sectors(variant: str, max_weight: int, max_genus: int) -> list[Tuple[int, int]]:
    """Stable sectors ``(h, n)``, ``n >= 1``, within the cutoffs, in solving order."""
    out = []
    h_low = 0 if variant == KW else 1
    for h in range(h_low, max_genus + 1):
        n = 1
        while sector_weight(variant, h, n) <= max_weight:
            if 2 * h - 2 + n > 0 and not (variant == KW and h == 0 and n < 3):
                out.append((h, n))
            n += 1
    out.sort(key=lambda hn: (sector_weight(variant, *hn), hn[0], hn[1]))
    return out


class FreeEnergyTable:
    """Solved ``S_{h,n}`` stored as monomial coefficients."""

    def __init__(self, variant: str, max_weight: int, max_genus: int,
                 sectors_: Mapping[Tuple[int, int], Mapping[Monomial, Fraction]]):
        self.variant = variant
        self.max_weight = max_weight
        self.max_genus = max_genus
        self.sectors: Dict[Tuple[int, int], Dict[Monomial, Fraction]] = {k: dict(v) for k, v in sectors_.items()}

    def coefficient(self, h: int, monomial: Monomial) -> Fraction:
        key = (h, len(monomial))
        if key not in self.sectors:
            raise KeyError(f"sector {key} was not solved")
        return self.sectors[key].get(tuple(sorted(monomial)), Fraction(0))

    def tensor_entry(self, h: int, labels) -> Fraction:
        """Symmetric tensor entry ``S_{h,n; i_1..i_n}`` (``S_h = sum 1/n! S_{h,n;I} x^I``)."""
        monomial = tuple(sorted(labels))
        return self.coefficient(h, monomial) * multiplicity_factor(monomial)

    def intersection_number(self, h: int, ks) -> Fraction:
        """``<tau_{k_1} ... tau_{k_n}>_h`` read off through the ``(2k+1)!!`` dictionary."""
        labels = [2 * k + 1 for k in ks]
        return self.tensor_entry(h, labels) / prod(double_factorial(l) for l in labels)

    def log_z(self) -> FockPolynomial:
        terms = {}
        for (h, _n), poly in self.sectors.items():
            for m, c in poly.items():
                terms[(m, h - 1)] = c
        return FockPolynomial(terms)

    def in_window(self, h: int, n: int) -> bool:
        return h <= self.max_genus and sector_weight(self.variant, h, n) <= self.max_weight


def _derivative(poly: Mapping[Monomial, Fraction], label: int) -> Dict[Monomial, Fraction]:
    out: Dict[Monomial, Fraction] = {}
    for m, c in poly.items():
        mult = m.count(label)
        if mult:
            key = _remove_one(m, label)
            out[key] = out.get(key, Fraction(0)) + c * mult
    return out


def _add_into(out: Dict[Monomial, Fraction], poly: Mapping[Monomial, Fraction], factor: Fraction) -> None:
    for m, c in poly.items():
        out[m] = out.get(m, Fraction(0)) + c * factor


def _product_into(out, a, b, factor) -> None:
    for ma, ca in a.items():
        for mb, cb in b.items():
            key = _merge(ma, mb)
            out[key] = out.get(key, Fraction(0)) + ca * cb * factor


def solve_by_recursion(variant: str, max_weight: int, max_genus: int) -> FreeEnergyTable:
    """Unique ``log Z`` annihilated by the Virasoro operators inside the cutoff window.

    Each ``L_m`` fixes one derivative ``d S / d x^{label(m)}`` in terms of
    lower sectors; the sector ``S_{h,n}`` is reassembled from its partial
    derivatives and every overlap between two derivatives is checked.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if max_weight < 1 or max_genus < 0:
        raise ValueError("cutoffs must be positive")
    solved: Dict[Tuple[int, int], Dict[Monomial, Fraction]] = {}

    def get(h, n):
        return solved.get((h, n), {})

    for h, n in sectors(variant, max_weight, max_genus):
        top = max_label(variant, h, n)
        result: Dict[Monomial, Fraction] = {}
        lowest_m = -1 if variant == KW else 0
        m = lowest_m
        while True:
            op = VirasoroOperator(variant, m)
            label = op.derivative_label
            if label > top:
                break
            # rhs of  1/2 d_label S = (...)  restricted to hbar^{h-1}, degree n-1
            rhs: Dict[Monomial, Fraction] = {}
            for i, j in op.quadratic_pairs():
                _add_into(rhs, _derivative(_derivative(get(h - 1, n + 1), i), j), Fraction(1, 4))
                for h1 in range(0, h + 1):
                    for n1 in range(1, n + 1):
                        n2 = n + 1 - n1
                        a, b = get(h1, n1), get(h - h1, n2)
                        if a and b:
                            _product_into(rhs, _derivative(a, i), _derivative(b, j), Fraction(1, 4))
            lower = get(h, n - 1)
            for var in sorted({v for mono in lower for v in mono}):
                i = var - 2 * m
                if i >= 1:
                    d = _derivative(lower, var)
                    for mono, c in d.items():
                        key = _insert(mono, i)
                        rhs[key] = rhs.get(key, Fraction(0)) + c * Fraction(i, 2)
            if m == 0 and (h, n) == (1, 1):
                rhs[()] = rhs.get((), Fraction(0)) + Fraction(1, 16)
            if variant == KW and m == -1 and (h, n) == (0, 3):
                rhs[(1, 1)] = rhs.get((1, 1), Fraction(0)) + Fraction(1, 4)
            for mono, c in rhs.items():
                if not c:
                    continue
                full = _insert(mono, label)
                value = 2 * c / full.count(label)
                previous = result.get(full)
                if previous is not None and previous != value:
                    raise InconsistentSystem(f"inconsistent system at sector {(h, n)}, monomial {full}")
                result[full] = value
            m += 1
        # every monomial must be reachable from each of its variables
        for mono, value in result.items():
            for label in set(mono):
                mm = (label - 3) // 2 if variant == KW else (label - 1) // 2
                if mm < lowest_m:
                    raise InconsistentSystem(f"variable x^{label} has no constraint")
        solved[(h, n)] = {k: v for k, v in result.items() if v}
    return FreeEnergyTable(variant, max_weight, max_genus, solved)


def verify_annihilation(table: FreeEnergyTable, modes: range | None = None) -> list[tuple]:
    """Nonzero residual entries of every ``L_m`` that lie fully inside the window.

    An empty list means the truncated ``log Z`` is annihilated exactly.
    """
    log_z = table.log_z()
    failures = []
    lowest = -1 if table.variant == KW else 0
    if modes is None:
        top = max((max_label(table.variant, h, n) for h, n in table.sectors), default=1)
        highest = (top - 3) // 2 if table.variant == KW else (top - 1) // 2
        modes = range(lowest, highest + 1)
    for m in modes:
        op = VirasoroOperator(table.variant, m)
        residual = apply_virasoro(op, log_z)
        for (mono, p), c in residual.terms.items():
            h, n = p + 1, len(mono) + 1
            if table.in_window(h, n) and _sector_is_complete(table, h, n):
                failures.append((m, mono, p, c))
    return failures


def _sector_is_complete(table: FreeEnergyTable, h: int, n: int) -> bool:
    """True when every sector feeding the residual at ``(h, n)`` was solved."""
    needed = [(h, n), (h, n - 1), (h - 1, n + 1)]
    for h1 in range(0, h + 1):
        for n1 in range(1, n + 1):
            needed.append((h1, n1))
            needed.append((h - h1, n + 1 - n1))
    for hh, nn in needed:
        if hh < 0 or nn < 1:
            continue
        if 2 * hh - 2 + nn <= 0:
            continue
        if table.variant == BGW and hh == 0:
            continue
        if not table.in_window(hh, nn):
            return False
    return True


def commutator_check(variant: str, m: int, n: int, max_weight: int = 4, max_degree: int = 3,
                     hbar_powers=(-1, 0, 1)) -> bool:
    """``[L_m, L_n] = (m - n) L_{m+n}`` on every basis monomial inside the window."""
    lm, ln = VirasoroOperator(variant, m), VirasoroOperator(variant, n)
    lowest = -1 if variant == KW else 0
    lmn = VirasoroOperator(variant, m + n) if m + n >= lowest else None
    for mono in _monomials(max_weight, max_degree):
        for p in hbar_powers:
            basis = FockPolynomial({(mono, p): 1})
            lhs = lm.apply(ln.apply(basis)) - ln.apply(lm.apply(basis))
            rhs = lmn.apply(basis).scale(m - n) if lmn is not None else FockPolynomial()
            if m - n != 0 and lmn is None:
                return False
            if lhs != rhs:
                return False
    return True


def _monomials(max_weight: int, max_degree: int) -> Iterator[Monomial]:
    labels = [2 * k + 1 for k in range(max_weight)]

    def rec(start: int, current: Monomial, weight: int):
        yield current
        if len(current) == max_degree:
            return
        for idx in range(start, len(labels)):
            w = variable_weight(labels[idx])
            if weight + w <= max_weight:
                yield from rec(idx, current + (labels[idx],), weight + w)

    yield from rec(0, (), 0)


def bgw_x1_series(table: FreeEnergyTable, order: int) -> list[Fraction]:
    """Coefficients of ``(x^1)^n`` in ``log Z(x^1, 0, 0, ...)`` for ``n = 1..order``.

    Only genus one contributes on the ``x^1`` axis because every other genus
    carries a positive power of a higher variable.
    """
    out = []
    for n in range(1, order + 1):
        total = Fraction(0)
        for (h, nn), poly in table.sectors.items():
            if nn == n:
                total += poly.get((1,) * n, Fraction(0))
        out.append(total)
    return out

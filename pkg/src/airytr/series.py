"""Exact truncated Laurent series over the rationals.

A :class:`Series` stores coefficients for exponents ``low .. order``.  Every
exponent below ``low`` is exactly zero and every exponent above ``order`` is
unknown.  Reading an unknown coefficient raises :class:`TruncationError`
instead of silently returning zero, so results computed here are either exact
or refused.

Differentials are written in the ``dz/z`` convention: a
:class:`LaurentDifferential` wraps a series ``S`` and stands for ``S(z) dz/z``,
so the coefficient ``J_n`` of ``z^{-n} dz/z`` is ``S[-n]``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class TruncationError(ArithmeticError):
    """A coefficient outside the known window was requested."""

    def __init__(self, message: str = "truncation too short"):
        super().__init__(message)


class NonUnitDivisor(ZeroDivisionError):
    def __init__(self, message: str = "non-unit divisor"):
        super().__init__(message)


def _frac(value: Scalar) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


class Series:
    """Truncated Laurent series ``sum_{n=low}^{order} c_n z^n + O(z^{order+1})``."""

    __slots__ = ("low", "order", "coeffs")

    def __init__(self, low: int, coeffs: Iterable[Scalar], order: int):
        coeffs = tuple(_frac(c) for c in coeffs)
        if low > order + 1:
            raise ValueError("lowest exponent exceeds truncation order + 1")
        if len(coeffs) != order - low + 1:
            raise ValueError("coefficient count does not match the exponent window")
        self.low = low
        self.order = order
        self.coeffs = coeffs

    # construction -----------------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Mapping[int, Scalar], order: int, low: int | None = None) -> "Series":
        if low is None:
            known = [e for e, c in terms.items() if c != 0 and e <= order]
            low = min(known) if known else order + 1
        coeffs = [Fraction(0)] * (order - low + 1)
        for e, c in terms.items():
            if e > order:
                continue
            if e < low:
                if c != 0:
                    raise ValueError("term below the requested lowest exponent")
                continue
            coeffs[e - low] += _frac(c)
        return cls(low, coeffs, order)

    @classmethod
    def monomial(cls, exponent: int, coeff: Scalar, order: int) -> "Series":
        return cls.from_terms({exponent: coeff}, order)

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls(order + 1, (), order)

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls.from_terms({0: 1}, order)

    # access -----------------------------------------------------------------
    def __getitem__(self, exponent: int) -> Fraction:
        if exponent > self.order:
            raise TruncationError()
        if exponent < self.low:
            return Fraction(0)
        return self.coeffs[exponent - self.low]

    def terms(self) -> dict[int, Fraction]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def valuation(self) -> int | None:
        """Exponent of the first nonzero known coefficient, or None."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return self.low + i
        return None

    def _effective_valuation(self) -> int:
        v = self.valuation()
        return self.order + 1 if v is None else v

    def is_zero(self) -> bool:
        return self.valuation() is None

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise TruncationError()
        low = min(self.low, order + 1)
        return Series.from_terms(self.terms(), order, low=low)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.terms() == other.terms()

    def __hash__(self) -> int:
        return hash((self.order, tuple(sorted(self.terms().items()))))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*z^{e}" for e, c in sorted(self.terms().items())) or "0"
        return f"Series({body} + O(z^{self.order + 1}))"

    # arithmetic -------------------------------------------------------------
    def __neg__(self) -> "Series":
        return Series(self.low, (-c for c in self.coeffs), self.order)

    def __add__(self, other: "Series | Scalar") -> "Series":
        if not isinstance(other, Series):
            other = Series.monomial(0, other, self.order)
        order = min(self.order, other.order)
        low = min(self.low, other.low, order + 1)
        out = [Fraction(0)] * (order - low + 1)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                e = s.low + i
                if e <= order:
                    out[e - low] += c
        return Series(low, out, order)

    __radd__ = __add__

    def __sub__(self, other: "Series | Scalar") -> "Series":
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Series":
        return (-self) + other

    def scale(self, factor: Scalar) -> "Series":
        factor = _frac(factor)
        return Series(self.low, (c * factor for c in self.coeffs), self.order)

    def __mul__(self, other: "Series | Scalar") -> "Series":
        if not isinstance(other, Series):
            return self.scale(other)
        va, vb = self._effective_valuation(), other._effective_valuation()
        order = min(self.order + vb, other.order + va)
        low = min(self.low + other.low, order + 1)
        out = [Fraction(0)] * (order - low + 1)
        a_terms = [(self.low + i, c) for i, c in enumerate(self.coeffs) if c]
        b_terms = [(other.low + j, d) for j, d in enumerate(other.coeffs) if d]
        for ea, ca in a_terms:
            limit = order - ea
            for eb, cb in b_terms:
                if eb > limit:
                    break
                out[ea + eb - low] += ca * cb
        return Series(low, out, order)

    __rmul__ = __mul__

    def inverse(self) -> "Series":
        v = self.valuation()
        if v is None:
            raise NonUnitDivisor()
        lead = self[v]
        rel = self.order - v  # relative precision of the unit part
        unit = [self[v + i] for i in range(rel + 1)]
        inv = [Fraction(0)] * (rel + 1)
        inv[0] = 1 / lead
        for n in range(1, rel + 1):
            acc = sum((unit[k] * inv[n - k] for k in range(1, n + 1)), Fraction(0))
            inv[n] = -acc / lead
        return Series(-v, inv, -v + rel)

    def __truediv__(self, other: "Series | Scalar") -> "Series":
        if not isinstance(other, Series):
            other = _frac(other)
            if other == 0:
                raise NonUnitDivisor()
            return self.scale(1 / other)
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> "Series":
        return self.inverse().scale(other)

    def __pow__(self, exponent: int) -> "Series":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return Series.one(self.order - self._effective_valuation())
        out = None
        base = self
        while exponent:
            if exponent & 1:
                out = base if out is None else out * base
            exponent >>= 1
            if exponent:
                base = base * base
        return out

    def derivative(self) -> "Series":
        low = self.low - 1
        coeffs = [c * (self.low + i) for i, c in enumerate(self.coeffs)]
        return Series(low, coeffs, self.order - 1)

    def shift(self, k: int) -> "Series":
        """Multiply by ``z^k``."""
        return Series(self.low + k, self.coeffs, self.order + k)

    def reflect(self) -> "Series":
        """Substitute ``z -> -z``."""
        return Series(self.low, (c if (self.low + i) % 2 == 0 else -c for i, c in enumerate(self.coeffs)), self.order)

    def integrate(self) -> "Series":
        """Primitive with zero constant term; requires a vanishing ``z^{-1}`` coefficient."""
        if self.low <= -1 <= self.order and self[-1] != 0:
            raise ValueError("series has a logarithmic term")
        terms = {e + 1: c / (e + 1) for e, c in self.terms().items()}
        return Series.from_terms(terms, self.order + 1, low=min(self.low + 1, self.order + 2))

    def compose(self, inner: "Series") -> "Series":
        """Return ``self(inner(z))`` for a power series ``self`` and ``inner = O(z)``."""
        if self.low < 0:
            raise ValueError("outer series must be a power series")
        vi = inner.valuation()
        if vi is None or vi < 1 or inner.low < 1:
            raise ValueError("inner series must vanish at the origin")
        order = min((self.order + 1) * vi - 1, inner.order)
        result = Series.zero(order)
        power = Series.one(order)
        for e in range(0, self.order + 1):
            if e >= 1:
                power = power * inner
                power = power.truncate(order) if power.order > order else power
            c = self[e]
            if c:
                result = result + power.scale(c)
        return result

    def reversion(self) -> "Series":
        """Compositional inverse of ``a_1 z + a_2 z^2 + ...`` with ``a_1 != 0``."""
        if self.valuation() != 1 or self.low < 1:
            raise ValueError("reversion needs a series starting at z^1")
        n = self.order
        a1 = self[1]
        # Newton-free iteration: g <- z/a1 - (self(g) - a1 g)/a1, one exponent per pass
        g = Series.from_terms({1: 1 / a1}, n)
        for _ in range(n):
            fg = self.compose(g)
            correction = (fg - Series.from_terms({1: 1}, fg.order)).scale(1 / a1)
            g = (g - correction).truncate(n)
        return g

    def sqrt(self) -> "Series":
        """Square root of a power series whose constant term is a rational square."""
        v = self.valuation()
        if v is None or v != 0:
            raise ValueError("sqrt needs a power series with nonzero constant term")
        root0 = _rational_sqrt(self[0])
        if root0 is None:
            raise ValueError("constant term is not a rational square")
        n = self.order
        r = [Fraction(0)] * (n + 1)
        r[0] = root0
        for k in range(1, n + 1):
            acc = sum((r[i] * r[k - i] for i in range(1, k)), Fraction(0))
            r[k] = (self[k] - acc) / (2 * root0)
        return Series(0, r, n)

    def even_part(self) -> "Series":
        return Series(self.low, (c if (self.low + i) % 2 == 0 else 0 for i, c in enumerate(self.coeffs)), self.order)

    def odd_part(self) -> "Series":
        return Series(self.low, (c if (self.low + i) % 2 else 0 for i, c in enumerate(self.coeffs)), self.order)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt

    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def rational_sqrt(q: Scalar) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if it is not a square."""
    return _rational_sqrt(_frac(q))


def parity_split(s: Series) -> tuple[Series, Series]:
    """Split ``s`` into its even and odd parts under ``z -> -z``."""
    return s.even_part(), s.odd_part()


class LaurentDifferential:
    """``S(z) dz/z`` with no ``dz/z`` term, i.e. an element of the residue-free space."""

    __slots__ = ("series",)

    def __init__(self, series: Series):
        if series.low <= 0 <= series.order and series[0] != 0:
            raise ValueError("differential has a residue (J_0 must vanish)")
        self.series = series

    @classmethod
    def from_J(cls, coefficients: Mapping[int, Scalar], order: int) -> "LaurentDifferential":
        """Build from ``{n: J_n}`` meaning ``sum J_n z^{-n} dz/z``; ``order`` bounds the exponent of ``z``."""
        return cls(Series.from_terms({-n: c for n, c in coefficients.items()}, order))

    def J(self, n: int) -> Fraction:
        return self.series[-n]

    def pole_order(self) -> int:
        v = self.series.valuation()
        return 0 if v is None or v >= 0 else -v

    def antiderivative(self) -> Series:
        """The function ``f`` with ``df`` equal to this differential and ``f(0)`` term zero."""
        terms = {e: c / e for e, c in self.series.terms().items()}
        return Series.from_terms(terms, self.series.order, low=min(self.series.low, self.series.order + 1))

    def __add__(self, other: "LaurentDifferential") -> "LaurentDifferential":
        return LaurentDifferential(self.series + other.series)

    def scale(self, factor: Scalar) -> "LaurentDifferential":
        return LaurentDifferential(self.series.scale(factor))

    def __repr__(self) -> str:
        return f"LaurentDifferential({self.series!r} dz/z)"


def residue_at_zero(f: Series, d: LaurentDifferential) -> Fraction:
    """Residue at ``z = 0`` of ``f * d``."""
    return (f * d.series)[0]


def symplectic_pair(eta1: LaurentDifferential, eta2: LaurentDifferential) -> Fraction:
    """``Res_{z=0} f_1 eta_2`` where ``df_1 = eta_1``."""
    return residue_at_zero(eta1.antiderivative(), eta2)


class BivariateSeries:
    """Truncated power series in two variables, known for total degree ``<= order``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Mapping[tuple[int, int], Scalar], order: int):
        self.order = order
        self.coeffs = {k: _frac(c) for k, c in coeffs.items() if c != 0 and k[0] + k[1] <= order}

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        if key[0] + key[1] > self.order:
            raise TruncationError()
        return self.coeffs.get(key, Fraction(0))

    @classmethod
    def from_product(cls, f: Series, g: Series, order: int) -> "BivariateSeries":
        """``f(z1) g(z2)`` for power series f, g."""
        out = {}
        for i, a in f.terms().items():
            for j, b in g.terms().items():
                if i + j <= order:
                    out[(i, j)] = a * b
        if f.order < order or g.order < order:
            raise TruncationError()
        return cls(out, order)

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return BivariateSeries(out, order)

    def __neg__(self) -> "BivariateSeries":
        return BivariateSeries({k: -c for k, c in self.coeffs.items()}, self.order)

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        return self + (-other)

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        order = min(self.order, other.order)
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), a in self.coeffs.items():
            for (k, l), b in other.coeffs.items():
                if i + j + k + l <= order:
                    key = (i + k, j + l)
                    out[key] = out.get(key, Fraction(0)) + a * b
        return BivariateSeries(out, order)

    def inverse(self) -> "BivariateSeries":
        c0 = self.coeffs.get((0, 0), Fraction(0))
        if c0 == 0:
            raise NonUnitDivisor()
        # solve (self * out) = 1 degree by degree
        out: dict[tuple[int, int], Fraction] = {}
        rest = [(k, c) for k, c in self.coeffs.items() if k != (0, 0)]
        for d in range(self.order + 1):
            for i in range(d + 1):
                j = d - i
                acc = Fraction(1) if d == 0 else Fraction(0)
                for (a, b), c in rest:
                    if a <= i and b <= j:
                        acc -= c * out.get((i - a, j - b), Fraction(0))
                if acc:
                    out[(i, j)] = acc / c0
        return BivariateSeries(out, self.order)

    def divide_by_difference(self) -> "BivariateSeries":
        """Exact quotient by ``(z1 - z2)``; the series must vanish on the diagonal."""
        out: dict[tuple[int, int], Fraction] = {}
        p = self.coeffs
        for d in range(self.order):
            # (z1 - z2) Q = P along total degree d + 1
            q = -p.get((0, d + 1), Fraction(0))
            if q:
                out[(0, d)] = q
            for i in range(1, d + 1):
                q = q - p.get((i, d + 1 - i), Fraction(0))
                if q:
                    out[(i, d - i)] = q
            if q != p.get((d + 1, 0), Fraction(0)):
                raise ValueError("series does not vanish on the diagonal")
        return BivariateSeries(out, self.order - 1)

    def is_symmetric(self) -> bool:
        return all(self.coeffs.get((j, i), Fraction(0)) == c for (i, j), c in self.coeffs.items())


class BergmanCorrections:
    """Regular part ``phi^{ab}_{kl}`` of a Bergman kernel in local charts.

    ``B(z1, z2) = [delta_ab / (z1 - z2)^2 + sum phi^{ab}_{kl} z1^k z2^l] dz1 dz2``,
    known for ``k + l <= order``.
    """

    __slots__ = ("entries", "order")

    def __init__(self, entries: Mapping[tuple, Scalar], order: int):
        self.order = order
        self.entries = {k: _frac(c) for k, c in entries.items() if c != 0 and k[2] + k[3] <= order}

    @classmethod
    def zero(cls, order: int) -> "BergmanCorrections":
        return cls({}, order)

    def get(self, alpha, beta, k: int, l: int) -> Fraction:
        if k + l > self.order:
            raise TruncationError()
        return self.entries.get((alpha, beta, k, l), Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries

    def is_symmetric(self) -> bool:
        return all(self.entries.get((b, a, l, k), Fraction(0)) == c for (a, b, k, l), c in self.entries.items())

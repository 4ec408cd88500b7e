"""Quadratic Airy structures: constraint checks, classical graph, S_0 and abstract TR.

A structure is stored in the normalized form

    H_i = -y_i + a_{ijk} x^j x^k + 2 b_{ij}^k x^j y_k + c_i^{jk} y_j y_k,

quantized to ``-hbar d_i + a x x + 2 hbar b x d + hbar^2 c d d + hbar eps_i``.
The Poisson bracket is ``{f, h} = sum_i (df/dy_i dh/dx^i - df/dx^i dh/dy_i)``,
which makes ``{H_i, H_j} = g_{ij}^k H_k`` with ``g_{ij}^k = 2(b_{ji}^k - b_{ij}^k)``.

Mode labels are ints, or ``(tag, int)`` pairs for product structures.  Graded
structures (KW, BGW) carry a shift ``d`` with ``a_{ijk} != 0 => i+j+k = d``,
``b_{ij}^k != 0 => i+j-k = d`` and ``c_i^{jk} != 0 => i-j-k = d``; together
with ``max_mode`` this tells the checker which instances a truncation can see.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations
from math import factorial
from typing import Dict, Hashable, Iterable, Mapping, Optional, Sequence, Tuple

from .series import TruncationError

Label = Hashable
Poly = Dict[Tuple, Fraction]


class NonIntegrable(ArithmeticError):
    def __init__(self, message: str = "non-integrable"):
        super().__init__(message)


class SymmetryViolation(ArithmeticError):
    def __init__(self, message: str = "symmetry violation"):
        super().__init__(message)


class LabelClash(ValueError):
    def __init__(self, message: str = "label clash"):
        super().__init__(message)


def level(label: Label) -> int:
    """Integer part of a mode label."""
    return label[1] if isinstance(label, tuple) else label


def block(label: Label):
    return label[0] if isinstance(label, tuple) else None


@dataclass
class AiryTensors:
    modes: Tuple[Label, ...]
    a: Dict[Tuple[Label, Label, Label], Fraction] = field(default_factory=dict)
    b: Dict[Tuple[Label, Label, Label], Fraction] = field(default_factory=dict)
    c: Dict[Tuple[Label, Label, Label], Fraction] = field(default_factory=dict)
    eps: Dict[Label, Fraction] = field(default_factory=dict)
    grade_shift: Optional[int] = None
    max_mode: Optional[int] = None
    even_modes_implicit: bool = False

    def __post_init__(self):
        self.modes = tuple(sorted(set(self.modes), key=_label_key))
        known = set(self.modes)
        self.a = _symmetrize_keys(self.a, full=True)
        self.c = _symmetrize_keys(self.c, full=False)
        self.b = {k: Fraction(v) for k, v in self.b.items() if v}
        self.eps = {k: Fraction(v) for k, v in self.eps.items() if v}
        for key in list(self.a) + list(self.b) + list(self.c):
            if not set(key) <= known:
                raise ValueError(f"tensor entry {key} uses a label outside the mode set")
        self._g = None

    # sparse access
    def A(self, i, j, k) -> Fraction:
        return self.a.get((i, j, k), Fraction(0))

    def B(self, i, j, k) -> Fraction:
        return self.b.get((i, j, k), Fraction(0))

    def C(self, i, j, k) -> Fraction:
        return self.c.get((i, j, k), Fraction(0))

    @property
    def g(self) -> Dict[Tuple[Label, Label, Label], Fraction]:
        """Structure constants ``g_{ij}^k = 2(b_{ji}^k - b_{ij}^k)``."""
        if self._g is None:
            out: Dict = defaultdict(Fraction)
            for (i, j, k), v in self.b.items():
                out[(j, i, k)] += 2 * v
                out[(i, j, k)] -= 2 * v
            self._g = {k: v for k, v in out.items() if v}
        return self._g

    def with_changes(self, a=None, b=None, c=None, eps=None) -> "AiryTensors":
        """Copy with selected entries overwritten (used for perturbation tests)."""
        na, nb, nc, ne = dict(self.a), dict(self.b), dict(self.c), dict(self.eps)
        for key, value in (a or {}).items():
            for p in set(permutations(key)):
                na.pop(p, None)
            na[key] = Fraction(value)
        for key, value in (c or {}).items():
            nc.pop((key[0], key[2], key[1]), None)
            nc[key] = Fraction(value)
        nb.update({k: Fraction(v) for k, v in (b or {}).items()})
        ne.update({k: Fraction(v) for k, v in (eps or {}).items()})
        return AiryTensors(self.modes, na, nb, nc, ne, self.grade_shift, self.max_mode,
                           self.even_modes_implicit)


def _label_key(label):
    return (0, label, 0) if not isinstance(label, tuple) else (1, str(label[0]), label[1])


def _symmetrize_keys(entries, full: bool):
    """Expand a partially specified tensor to every permutation of the symmetric slots.

    Conflicting values for two orderings raise; this is how an asymmetric input is rejected.
    """
    out: Dict = {}
    for key, value in entries.items():
        value = Fraction(value)
        if not value:
            continue
        perms = set(permutations(key)) if full else {key, (key[0], key[2], key[1])}
        for p in perms:
            if p in out and out[p] != value:
                raise ValueError(f"entries {key} and {p} disagree; tensor must be symmetric")
            out[p] = value
    return out


# ----------------------------------------------------------------------------- builders

def _odd_modes(max_mode: int) -> list[int]:
    return list(range(1, max_mode + 1, 2))


def build_kw(max_mode: int, include_even: bool = False) -> AiryTensors:
    """Kontsevich-Witten structure on modes ``<= max_mode``, scaled so each ``H_k`` leads with ``-y_k``.

    Odd ``H_k`` is twice ``hbar L_{(k-3)/2}`` read through ``y = hbar d/dx``:
    ``a_111 = 1/2``, ``b_{kj}^{j+k-3} = j/2``, ``c_k^{ij} = 1/2`` for ``i+j = k-3``,
    ``eps_3 = 1/8``.  Even modes (``H_k = -y_k``) carry no tensor entries.
    """
    if max_mode < 3 or max_mode % 2 == 0:
        raise ValueError("max_mode must be an odd integer >= 3")
    modes = _odd_modes(max_mode)
    b = {}
    c = {}
    for k in modes:
        for j in modes:
            target = j + k - 3
            if 1 <= target <= max_mode:
                b[(k, j, target)] = Fraction(j, 2)
        for i in modes:
            j = k - 3 - i
            if j >= 1:
                c[(k, i, j)] = Fraction(1, 2)
    all_modes = list(range(1, max_mode + 1)) if include_even else modes
    return AiryTensors(tuple(all_modes), {(1, 1, 1): Fraction(1, 2)}, b, c, {3: Fraction(1, 8)},
                       grade_shift=3, max_mode=max_mode, even_modes_implicit=not include_even)


def build_bgw(max_mode: int, include_even: bool = False) -> AiryTensors:
    """Brezin-Gross-Witten structure: ``A = 0``, ``b_{kj}^{j+k-1} = j/2``,
    ``c_k^{ij} = 1/2`` for ``i+j = k-1``, and ``eps_1 = 1/8``."""
    if max_mode < 1 or max_mode % 2 == 0:
        raise ValueError("max_mode must be an odd integer >= 1")
    modes = _odd_modes(max_mode)
    b = {}
    c = {}
    for k in modes:
        for j in modes:
            target = j + k - 1
            if target <= max_mode:
                b[(k, j, target)] = Fraction(j, 2)
        for i in modes:
            j = k - 1 - i
            if j >= 1:
                c[(k, i, j)] = Fraction(1, 2)
    all_modes = list(range(1, max_mode + 1)) if include_even else modes
    return AiryTensors(tuple(all_modes), {}, b, c, {1: Fraction(1, 8)},
                       grade_shift=1, max_mode=max_mode, even_modes_implicit=not include_even)


def conic_structure(quantum_shift: Fraction | int = 0) -> AiryTensors:
    """One-mode structure of the conic ``-y + x^2 + 2xy + y^2``."""
    eps = {1: Fraction(quantum_shift)} if quantum_shift else {}
    return AiryTensors((1,), {(1, 1, 1): 1}, {(1, 1, 1): 1}, {(1, 1, 1): 1}, eps)


def relabel(structure: AiryTensors, tag) -> AiryTensors:
    """Replace every label ``l`` by ``(tag, l)``."""
    def f(l):
        return (tag, level(l))

    def remap(d):
        return {tuple(f(x) for x in key): v for key, v in d.items()}

    return AiryTensors(tuple(f(m) for m in structure.modes), remap(structure.a), remap(structure.b),
                       remap(structure.c), {f(k): v for k, v in structure.eps.items()},
                       structure.grade_shift, structure.max_mode, structure.even_modes_implicit)


def product_structure(parts: Sequence[AiryTensors], tags: Sequence | None = None) -> AiryTensors:
    """Block-diagonal structure on the disjoint union of the parts' modes.

    With ``tags`` every part is relabeled first; without them the labels must
    already be disjoint, otherwise :class:`LabelClash` is raised.
    """
    if not parts:
        raise ValueError("at least one part is required")
    if tags is not None:
        if len(tags) != len(parts) or len(set(tags)) != len(tags):
            raise ValueError("one distinct tag per part is required")
        parts = [relabel(p, t) for p, t in zip(parts, tags)]
    seen: set = set()
    for p in parts:
        if seen & set(p.modes):
            raise LabelClash()
        seen |= set(p.modes)
    shifts = {p.grade_shift for p in parts}
    maxes = [p.max_mode for p in parts]
    a, b, c, eps = {}, {}, {}, {}
    for p in parts:
        a.update(p.a)
        b.update(p.b)
        c.update(p.c)
        eps.update(p.eps)
    return AiryTensors(tuple(seen), a, b, c, eps,
                       shifts.pop() if len(shifts) == 1 else None,
                       None if None in maxes else min(maxes),
                       all(p.even_modes_implicit for p in parts))


# ----------------------------------------------------------------------------- checks

@dataclass
class ConstraintReport:
    passed: bool
    checked: int
    skipped: int
    failures: list = field(default_factory=list)

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def __bool__(self) -> bool:
        return self.passed


class _Index:
    """Sparse lookups of the tensors grouped by one slot."""

    def __init__(self, t: AiryTensors):
        self.a_by = defaultdict(list)      # a_{k p q}: k -> (p, q, v)
        for (k, p, q), v in t.a.items():
            self.a_by[k].append((p, q, v))
        self.b_by_up = defaultdict(list)   # b_{ij}^k: k -> (i, j, v)
        self.b_by_first = defaultdict(list)  # i -> (j, k, v)
        self.b_by_second = defaultdict(list)  # j -> (i, k, v)
        for (i, j, k), v in t.b.items():
            self.b_by_up[k].append((i, j, v))
            self.b_by_first[i].append((j, k, v))
            self.b_by_second[j].append((i, k, v))
        self.c_by_first = defaultdict(list)  # c_i^{jk}: i -> (j, k, v)
        self.c_by_up = defaultdict(list)     # j -> (i, k, v)
        for (i, j, k), v in t.c.items():
            self.c_by_first[i].append((j, k, v))
            self.c_by_up[j].append((i, k, v))
        self.g_by_up = defaultdict(list)
        for (i, j, k), v in t.g.items():
            self.g_by_up[k].append((i, j, v))


def _contract(left, right, arrange):
    """``out[arrange(l, r)] += vl * vr`` over matching contraction keys."""
    out: Dict = defaultdict(Fraction)
    for key, lhs in left.items():
        rhs = right.get(key)
        if not rhs:
            continue
        for l in lhs:
            for r in rhs:
                out[arrange(l, r)] += l[-1] * r[-1]
    return out


def _combine(*weighted):
    out: Dict = defaultdict(Fraction)
    for factor, table in weighted:
        for key, v in table.items():
            out[key] += factor * v
    return out


def _swap_ij(table):
    return {(j, i, s, t): v for (i, j, s, t), v in table.items()}


def _symmetrize_st(table):
    out: Dict = defaultdict(Fraction)
    for (i, j, s, t), v in table.items():
        out[(i, j, s, t)] += v / 2
        out[(i, j, t, s)] += v / 2
    return out


def relation_residuals(t: AiryTensors) -> Dict[int, Dict[Tuple, Fraction]]:
    """Left minus right side of the four classical relations, keyed by relation number.

    Relation 1 compares ``g`` with the linear part of ``{H_i, H_j}`` computed
    independently; relations 2 and 4 are compared after symmetrizing in ``(s, t)``,
    since only that part is seen by the bracket.
    """
    ix = _Index(t)
    # relation 1: linear y_k part of {H_i, H_j} is -g_ij^k
    bracket_linear: Dict = defaultdict(Fraction)
    for (i, m, k), v in t.b.items():
        # {-y_j, 2 b_{i m}^k x^m y_k} contributes -2 b_{ij}^k y_k to {H_j, H_i}
        bracket_linear[(m, i, k)] += -2 * v
        bracket_linear[(i, m, k)] += 2 * v
    r1 = {(i, j, k, None): -(bracket_linear.get((i, j, k), 0)) - t.g.get((i, j, k), 0)
          for (i, j, k) in set(bracket_linear) | set(t.g)}
    # A must be fully symmetric; _symmetrize_keys already rejects asymmetric input.

    # relation 2: 4(a_jks b_it^k - a_iks b_jt^k) = g_ij^k a_kst
    x2 = _contract(ix.a_by, ix.b_by_up, lambda l, r: (r[0], l[0], l[1], r[1]))
    y2 = _contract(ix.g_by_up, ix.a_by, lambda l, r: (l[0], l[1], r[0], r[1]))
    r2 = _symmetrize_st(_combine((4, x2), (-4, _swap_ij(x2)), (-1, y2)))

    # relation 3: 4(a_jks c_i^{kt} - a_iks c_j^{kt} + b_is^k b_jk^t - b_ik^t b_js^k) = 2 g_ij^k b_ks^t
    p3 = _contract(ix.a_by, ix.c_by_up, lambda l, r: (r[0], l[0], l[1], r[1]))
    q3 = _contract(ix.b_by_up, ix.b_by_second, lambda l, r: (l[0], r[0], l[1], r[1]))
    z3 = _contract(ix.g_by_up, ix.b_by_first, lambda l, r: (l[0], l[1], r[0], r[1]))
    r3 = _combine((4, p3), (-4, _swap_ij(p3)), (4, q3), (-4, _swap_ij(q3)), (-2, z3))

    # relation 4: 4(b_jk^s c_i^{kt} - b_ik^s c_j^{kt}) = g_ij^k c_k^{st}
    m4 = _contract(ix.b_by_second, ix.c_by_up, lambda l, r: (r[0], l[0], l[1], r[1]))
    n4 = _contract(ix.g_by_up, ix.c_by_first, lambda l, r: (l[0], l[1], r[0], r[1]))
    r4 = _symmetrize_st(_combine((4, m4), (-4, _swap_ij(m4)), (-1, n4)))
    return {1: r1, 2: r2, 3: r3, 4: r4}


def quantum_residual(t: AiryTensors) -> Dict[Tuple, Fraction]:
    """``2(a_jst c_i^{st} - a_ist c_j^{st}) - g_ij^k eps_k`` for all touched ``(i, j)``."""
    a_pair = defaultdict(list)
    for (j, s, tt), v in t.a.items():
        a_pair[(s, tt)].append((j, v))
    c_pair = defaultdict(list)
    for (i, s, tt), v in t.c.items():
        c_pair[(s, tt)].append((i, v))
    u = _contract(c_pair, a_pair, lambda l, r: (l[0], r[0]))
    out: Dict = defaultdict(Fraction)
    for (i, j), v in u.items():
        out[(i, j)] += 2 * v
        out[(j, i)] -= 2 * v
    for (i, j, k), v in t.g.items():
        out[(i, j)] -= v * t.eps.get(k, 0)
    return out


def _max_internal(relation: int, key, d: int) -> int:
    """Largest mode that any term of the given relation instance can reference."""
    if relation == 1:
        i, j, _k, _ = (level(x) if x is not None else 0 for x in key)
        return i + j - d
    if relation == "quantum":
        i, j = (level(x) for x in key)
        return i + j - d
    i, j, s, t = (level(x) for x in key)
    if relation == 2:
        return max(i + t, j + t, i + s, j + s, i + j) - d
    if relation == 3:
        return max(i + s - d, j + s - d, i + j - d, t + d - min(i, j))
    return max(i + j - d, max(s, t) + d - min(i, j))


def _verifiable(t: AiryTensors, relation, key) -> bool:
    if t.max_mode is None:
        return True
    if t.grade_shift is None:
        return False
    return _max_internal(relation, key, t.grade_shift) <= t.max_mode


def _report(t: AiryTensors, residuals: Iterable[Tuple[object, Dict]]) -> ConstraintReport:
    checked = skipped = 0
    failures = []
    for relation, table in residuals:
        for key in sorted(table, key=lambda k: tuple(_label_key(x) if x is not None else (0, 0, 0) for x in k)):
            if not _verifiable(t, relation, key):
                skipped += 1
                continue
            checked += 1
            if table[key]:
                failures.append((relation, key, table[key]))
    return ConstraintReport(not failures, checked, skipped, failures)


def check_classical(t: AiryTensors) -> ConstraintReport:
    """Evaluate the four classical relations on every touched index instance.

    Instances that a truncated structure cannot see are counted as skipped
    ("unverifiable at this truncation"), never as passes or failures.
    """
    res = relation_residuals(t)
    return _report(t, ((r, res[r]) for r in (1, 2, 3, 4)))


def check_quantum(t: AiryTensors) -> ConstraintReport:
    return _report(t, [("quantum", quantum_residual(t))])


# ----------------------------------------------------------------------------- bracket route

def _poly_add(out: Poly, key, v) -> None:
    value = out.get(key, Fraction(0)) + v
    if value:
        out[key] = value
    else:
        out.pop(key, None)


def hamiltonian(t: AiryTensors, i) -> Poly:
    """``H_i`` as a polynomial; keys are sorted tuples of ``('x', l)`` / ``('y', l)``."""
    out: Poly = {}
    _poly_add(out, (("y", i),), Fraction(-1))
    for (ii, j, k), v in t.a.items():
        if ii == i:
            _poly_add(out, tuple(sorted((("x", j), ("x", k)), key=_var_key)), v)
    for (ii, j, k), v in t.b.items():
        if ii == i:
            _poly_add(out, tuple(sorted((("x", j), ("y", k)), key=_var_key)), 2 * v)
    for (ii, j, k), v in t.c.items():
        if ii == i:
            _poly_add(out, tuple(sorted((("y", j), ("y", k)), key=_var_key)), v)
    return out


def _var_key(var):
    return (var[0], _label_key(var[1]))


def _poly_diff(p: Poly, var) -> Poly:
    out: Poly = {}
    for mono, c in p.items():
        n = mono.count(var)
        if n:
            idx = mono.index(var)
            _poly_add(out, mono[:idx] + mono[idx + 1:], c * n)
    return out


def _poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            _poly_add(out, tuple(sorted(m1 + m2, key=_var_key)), c1 * c2)
    return out


def poisson_bracket(f: Poly, h: Poly, modes) -> Poly:
    out: Poly = {}
    for l in modes:
        for mono, c in _poly_mul(_poly_diff(f, ("y", l)), _poly_diff(h, ("x", l))).items():
            _poly_add(out, mono, c)
        for mono, c in _poly_mul(_poly_diff(f, ("x", l)), _poly_diff(h, ("y", l))).items():
            _poly_add(out, mono, -c)
    return out


def bracket_closure_defect(t: AiryTensors, i, j) -> Poly:
    """``{H_i, H_j} - g_ij^k H_k``: zero exactly when the relations hold for this pair."""
    out = poisson_bracket(hamiltonian(t, i), hamiltonian(t, j), t.modes)
    for (ii, jj, k), v in t.g.items():
        if (ii, jj) == (i, j):
            for mono, c in hamiltonian(t, k).items():
                _poly_add(out, mono, -v * c)
    return out


# ----------------------------------------------------------------------------- classical graph

def _x_mono(*labels) -> Tuple:
    return tuple(sorted(labels, key=_label_key))


def _trunc_mul(p: Poly, q: Poly, degree: int) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            if len(m1) + len(m2) <= degree:
                _poly_add(out, _x_mono(*m1, *m2), c1 * c2)
    return out


@dataclass
class LagrangianExpansion:
    degree: int
    y: Dict[Label, Poly]

    def coefficients(self, mode, variable=None) -> list[Fraction]:
        """Coefficients of ``y_mode`` on powers of a single variable, degrees 0..degree."""
        variable = mode if variable is None else variable
        poly = self.y.get(mode, {})
        return [poly.get((variable,) * n, Fraction(0)) for n in range(self.degree + 1)]


def classical_expand(t: AiryTensors, degree: int) -> LagrangianExpansion:
    """Fixed-point iteration ``y^{(n+1)} = Hhat(x, y^{(n)})`` to total degree ``degree``.

    Asserts that step ``n+1`` changes nothing at degree ``<= n``.
    """
    if degree < 2:
        raise ValueError("degree must be at least 2")
    y: Dict[Label, Poly] = {i: {} for i in t.modes}
    a_of = defaultdict(list)
    for (i, j, k), v in t.a.items():
        a_of[i].append((j, k, v))
    b_of = defaultdict(list)
    for (i, j, k), v in t.b.items():
        b_of[i].append((j, k, v))
    c_of = defaultdict(list)
    for (i, j, k), v in t.c.items():
        c_of[i].append((j, k, v))
    for n in range(1, degree):
        new: Dict[Label, Poly] = {}
        for i in t.modes:
            out: Poly = {}
            for j, k, v in a_of[i]:
                _poly_add(out, _x_mono(j, k), v)
            for j, k, v in b_of[i]:
                for mono, c in y.get(k, {}).items():
                    if len(mono) + 1 <= degree:
                        _poly_add(out, _x_mono(j, *mono), 2 * v * c)
            for j, k, v in c_of[i]:
                for mono, c in _trunc_mul(y.get(j, {}), y.get(k, {}), degree).items():
                    _poly_add(out, mono, v * c)
            new[i] = out
        for i in t.modes:
            for mono in set(new[i]) | set(y[i]):
                if len(mono) <= n and new[i].get(mono, 0) != y[i].get(mono, 0):
                    raise ArithmeticError(f"graph iteration did not stabilize at degree {len(mono)}")
        y = new
    return LagrangianExpansion(degree, y)


def potential_s0(t: AiryTensors, degree: int) -> Poly:
    """Generating function with ``dS_0/dx^i = y_i`` through degree ``degree + 1``.

    Each monomial is reconstructed from every variable it contains; a
    disagreement means the ``y_i`` are not a gradient.
    """
    expansion = classical_expand(t, degree)
    s0: Poly = {}
    for i, poly in expansion.y.items():
        for mono, c in poly.items():
            full = _x_mono(i, *mono)
            value = c / full.count(i)
            if full in s0 and s0[full] != value:
                raise NonIntegrable()
            s0[full] = value
    for full in s0:
        for var in set(full):
            idx = full.index(var)
            rest = full[:idx] + full[idx + 1:]
            if expansion.y.get(var, {}).get(rest, 0) != s0[full] * full.count(var):
                raise NonIntegrable()
    return s0


# ----------------------------------------------------------------------------- abstract TR

class AbstractTRTable:
    """Symmetric tensors ``S_{h,n}`` with ``S_h = sum_n 1/n! S_{h,n;I} x^I``."""

    def __init__(self, structure: AiryTensors, chi_max: int):
        self.structure = structure
        self.chi_max = chi_max
        self.entries: Dict[Tuple[int, int], Dict[Tuple, Fraction]] = {}

    def get(self, h: int, indices) -> Fraction:
        n = len(indices)
        if 2 * h - 2 + n <= 0:
            return Fraction(0)
        if (h, n) not in self.entries:
            raise KeyError(f"sector {(h, n)} is outside chi_max = {self.chi_max}")
        return self.entries[(h, n)].get(tuple(sorted(indices, key=_label_key)), Fraction(0))

    def monomial_coefficient(self, h: int, indices) -> Fraction:
        """Coefficient of the monomial ``x^I`` in ``S_h``."""
        key = tuple(sorted(indices, key=_label_key))
        mult = 1
        for l in set(key):
            mult *= factorial(key.count(l))
        return self.get(h, key) / mult


def _candidate_indices(t: AiryTensors, n: int, chi: int):
    modes = [m for m in t.modes if not (t.even_modes_implicit and level(m) % 2 == 0)]
    for combo in combinations_with_replacement(modes, n):
        if t.grade_shift is not None:
            # graded structures: the sum of levels inside one block is fixed
            if any(sum(level(m) for m in combo if block(m) == blk) != t.grade_shift * chi
                   for blk in {block(m) for m in combo}):
                continue
        yield combo


def abstract_tr(t: AiryTensors, chi_max: int, check_symmetry: bool = True) -> AbstractTRTable:
    """Abstract topological recursion for ``2h - 2 + n <= chi_max``.

    Every entry is computed with its first index distinguished; with
    ``check_symmetry`` it is recomputed with each other distinct index in front
    and any disagreement raises :class:`SymmetryViolation`.
    """
    if chi_max < 1:
        raise ValueError("chi_max must be at least 1")
    table = AbstractTRTable(t, chi_max)
    b_of = defaultdict(list)
    for (i, j, k), v in t.b.items():
        b_of[(i, j)].append((k, v))
    c_of = defaultdict(list)
    for (i, j, k), v in t.c.items():
        c_of[i].append((j, k, v))

    def lookup(h, idx):
        if h < 0 or 2 * h - 2 + len(idx) <= 0 or (h == 0 and len(idx) <= 2):
            return Fraction(0)
        return table.get(h, idx)

    def compute(h, n, first, rest):
        total = Fraction(0)
        if (h, n) == (0, 3):
            total += 2 * t.A(first, rest[0], rest[1])
        if (h, n) == (1, 1):
            total += t.eps.get(first, Fraction(0))
        for pos, other in enumerate(rest):
            remaining = rest[:pos] + rest[pos + 1:]
            if (t.grade_shift is not None and t.max_mode is not None
                    and block(first) == block(other)
                    and level(first) + level(other) - t.grade_shift > t.max_mode):
                raise TruncationError(f"truncation too short for S_{(h, n)}")
            for k, v in b_of.get((first, other), ()):
                if (t.grade_shift is not None and t.max_mode is not None
                        and level(k) > t.max_mode):
                    raise TruncationError(f"truncation too short for S_{(h, n)}")
                total += 2 * v * lookup(h, (k,) + remaining)
        for j, k, v in c_of.get(first, ()):
            acc = lookup(h - 1, (j, k) + rest)
            positions = range(len(rest))
            for size in range(len(rest) + 1):
                for chosen in combinations(positions, size):
                    left = tuple(rest[p] for p in chosen)
                    right = tuple(rest[p] for p in positions if p not in chosen)
                    for h1 in range(h + 1):
                        lv = lookup(h1, (j,) + left)
                        if lv:
                            acc += lv * lookup(h - h1, (k,) + right)
            total += v * acc
        return total

    for chi in range(1, chi_max + 1):
        for h in range(0, chi // 2 + 2):
            n = chi - 2 * h + 2
            if n < 1 or (h == 0 and n < 3):
                continue
            sector: Dict[Tuple, Fraction] = {}
            table.entries[(h, n)] = sector
            for combo in _candidate_indices(t, n, chi):
                value = compute(h, n, combo[0], combo[1:])
                if check_symmetry:
                    for pos in range(1, n):
                        if combo[pos] != combo[pos - 1]:
                            alt = compute(h, n, combo[pos], combo[:pos] + combo[pos + 1:])
                            if alt != value:
                                raise SymmetryViolation(
                                    f"symmetry violation in S_{(h, n)} at {combo}: {value} != {alt}")
                if value:
                    sector[combo] = value
    return table


def conic_u1_coefficients(order: int, chi_max: int | None = None) -> list[Fraction]:
    """Coefficients of ``x^1 .. x^order`` in ``dS_1/dx`` for the quantized conic."""
    table = abstract_tr(conic_structure(), order + 1 if chi_max is None else chi_max)
    return [table.get(1, (1,) * (n + 1)) / factorial(n) for n in range(1, order + 1)]


def conic_catalan(degree: int) -> list[Fraction]:
    """Coefficients of ``x^2 .. x^degree`` of the classical conic graph ``y(x)``."""
    expansion = classical_expand(conic_structure(), degree)
    return expansion.coefficients(1)[2:]

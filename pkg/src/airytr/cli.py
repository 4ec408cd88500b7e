"""Command-line entry point, configuration files and JSON/CSV serialization.

Exit codes:

* ``0`` success
* ``2`` invalid configuration
* ``3`` a check failed (constraint, invariant, comparison or tolerance)
* ``4`` truncation exhausted or degenerate input family
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence

from . import airy, elliptic, recursion, virasoro
from .series import TruncationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CHECK = 3
EXIT_TRUNCATION = 4

CONVENTIONS = {
    "basis": "entry (point, k) multiplies the residue-free odd differential with leading term dz/z^(k+1) at that point",
    "anchor": "<tau_0^3>_0 = 1; intersection number = 2^(2h-2+n) * entry / prod (2k_i+1)!!",
    "epsilon": "quantum shift eps = 1/8 on the lowest nontrivial mode",
    "tensor": "abstract recursion tensor T = 2^(2h-2+n) * entry; log Z = sum hbar^(h-1) sum_n T x^I / n!",
}


class ConfigError(ValueError):
    pass


# ----------------------------------------------------------------------------- rationals

def encode_fraction(value: Fraction) -> Dict[str, str]:
    value = Fraction(value)
    return {"num": str(value.numerator), "den": str(value.denominator)}


def decode_fraction(entry: Mapping[str, Any]) -> Fraction:
    num, den = entry["num"], entry["den"]
    if not isinstance(num, str) or not isinstance(den, str):
        raise ConfigError("rationals must be serialized as numerator/denominator strings")
    return Fraction(int(num), int(den))


# ----------------------------------------------------------------------------- correlator export

def correlators_to_json(table: recursion.CorrelatorTable) -> Dict[str, Any]:
    labels = sorted({l for sector in table.sectors.values() for key in sector for l in key},
                    key=lambda l: (str(l[0]), l[1]))
    sectors = []
    for (h, n) in sorted(table.sectors):
        entries = [
            {"index": [k for _p, k in key], "points": [p for p, _k in key], **encode_fraction(value)}
            for key, value in sorted(table.sectors[(h, n)].items(), key=lambda kv: [(str(p), k) for p, k in kv[0]])
        ]
        sectors.append({"h": h, "n": n, "entries": entries})
    return {
        "curve": table.curve.name,
        "chi_max": table.chi_max,
        "order": table.curve.order,
        "labels": [{"point": p, "k": k} for p, k in labels],
        "correlators": sectors,
        "conventions": dict(CONVENTIONS),
    }


def correlators_from_json(doc: Mapping[str, Any]) -> Dict[tuple, Dict[tuple, Fraction]]:
    """Sectors ``{(h, n): {((point, k), ...): value}}`` exactly as exported."""
    if "conventions" not in doc:
        raise ConfigError("export is missing its conventions block")
    out: Dict[tuple, Dict[tuple, Fraction]] = {}
    for sector in doc["correlators"]:
        entries = {}
        for e in sector["entries"]:
            key = tuple(zip(e["points"], e["index"]))
            entries[key] = decode_fraction(e)
        out[(sector["h"], sector["n"])] = entries
    return out


def correlators_to_csv(table: recursion.CorrelatorTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["h", "n", "index", "value"])
    for (h, n) in sorted(table.sectors):
        for key, value in sorted(table.sectors[(h, n)].items(), key=lambda kv: [(str(p), k) for p, k in kv[0]]):
            writer.writerow([h, n, " ".join(f"{p}:{k}" for p, k in key), str(value)])
    return buf.getvalue()


def free_energy_to_json(table: virasoro.FreeEnergyTable) -> Dict[str, Any]:
    sectors = []
    for (h, n) in sorted(table.sectors):
        entries = [{"index": list(mono), **encode_fraction(table.tensor_entry(h, mono))}
                   for mono in sorted(table.sectors[(h, n)])]
        sectors.append({"h": h, "n": n, "entries": entries})
    return {
        "variant": table.variant,
        "max_weight": table.max_weight,
        "max_genus": table.max_genus,
        "tensors": sectors,
        "conventions": dict(CONVENTIONS),
    }


def free_energy_from_json(doc: Mapping[str, Any]) -> Dict[tuple, Dict[tuple, Fraction]]:
    if "conventions" not in doc:
        raise ConfigError("export is missing its conventions block")
    return {(s["h"], s["n"]): {tuple(e["index"]): decode_fraction(e) for e in s["entries"]}
            for s in doc["tensors"]}


# ----------------------------------------------------------------------------- Airy tensor files

def _encode_label(label):
    return list(label) if isinstance(label, tuple) else label


def _decode_label(label):
    return tuple(label) if isinstance(label, list) else label


def structure_to_json(t: airy.AiryTensors) -> Dict[str, Any]:
    def entries(table):
        return [{"index": [_encode_label(l) for l in key], **encode_fraction(v)}
                for key, v in sorted(table.items(), key=lambda kv: str(kv[0]))]

    return {
        "modes": [_encode_label(m) for m in t.modes],
        "grade_shift": t.grade_shift,
        "max_mode": t.max_mode,
        "even_modes_implicit": t.even_modes_implicit,
        "a": entries(t.a),
        "b": entries(t.b),
        "c": entries(t.c),
        "eps": [{"index": [_encode_label(k)], **encode_fraction(v)} for k, v in sorted(t.eps.items(), key=str)],
    }


def structure_from_json(doc: Mapping[str, Any]) -> airy.AiryTensors:
    def table(name):
        return {tuple(_decode_label(l) for l in e["index"]): decode_fraction(e) for e in doc.get(name, [])}

    eps = {_decode_label(e["index"][0]): decode_fraction(e) for e in doc.get("eps", [])}
    try:
        return airy.AiryTensors(tuple(_decode_label(m) for m in doc["modes"]), table("a"), table("b"),
                                table("c"), eps, doc.get("grade_shift"), doc.get("max_mode"),
                                bool(doc.get("even_modes_implicit", False)))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid tensor file: {exc}") from exc


# ----------------------------------------------------------------------------- cross validation

@dataclass
class CrossReport:
    passed: bool
    compared: int
    first_mismatch: Optional[tuple] = None
    details: list = field(default_factory=list)


def _kw_modes(chi_max: int) -> int:
    return 2 * ((3 * chi_max) // 2) + 1


def triple_comparison(variant: str, chi_max: int, kernel_factor: Fraction | int = 1) -> CrossReport:
    """Recursion on the local curve, abstract TR and the Virasoro solution, entry by entry.

    The common currency is the tensor ``T = 2^(2h-2+n) omega``; abstract TR
    produces ``T`` directly and the Virasoro side through ``tensor_entry``.
    """
    if variant == virasoro.KW:
        curve = recursion.builtin_airy(max(24, 6 * chi_max + 8))
        structure = airy.build_kw(_kw_modes(chi_max))
        max_weight, max_genus = 2 * chi_max + 1, (chi_max + 1) // 2
    elif variant == virasoro.BGW:
        curve = recursion.builtin_bessel(max(24, 6 * chi_max + 8))
        structure = airy.build_bgw(max(1, 2 * ((chi_max + 1) // 2) + 1))
        max_weight, max_genus = chi_max, (chi_max + 1) // 2
    else:
        raise ConfigError(f"unknown variant {variant!r}")
    eo = recursion.compute_correlators(curve, chi_max, kernel_factor=kernel_factor)
    tr = airy.abstract_tr(structure, chi_max)
    vir = virasoro.solve_by_recursion(variant, max_weight, max_genus)

    compared = 0
    mismatches = []
    for (h, n), sector in sorted(tr.entries.items()):
        eo_sector = eo.sectors.get((h, n), {})
        keys = {tuple(sorted(k for _p, k in key)) for key in eo_sector} | set(sector)
        if vir.in_window(h, n) and (h, n) in vir.sectors:
            keys |= set(vir.sectors[(h, n)])
        for idx in sorted(keys):
            factor = Fraction(2) ** (2 * h - 2 + n)
            from_eo = eo_sector.get(tuple((0, k) for k in idx), Fraction(0)) * factor
            from_tr = tr.get(h, idx)
            from_vir = vir.tensor_entry(h, idx) if (h, n) in vir.sectors else None
            compared += 1
            if from_eo != from_tr or (from_vir is not None and from_vir != from_tr):
                mismatches.append(((h, n), idx, from_eo, from_tr, from_vir))
    return CrossReport(not mismatches, compared, mismatches[0] if mismatches else None, mismatches)


# ----------------------------------------------------------------------------- configuration

def read_config(path: str | Path) -> Dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment; keys use dashes or underscores."""
    out: Dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value.strip('"')
    return out


def _merge_config(args: argparse.Namespace, defaults: Mapping[str, Any]) -> argparse.Namespace:
    """Flags win over the config file, which wins over built-in defaults."""
    config = read_config(args.config) if getattr(args, "config", None) else {}
    for key, default in defaults.items():
        if getattr(args, key, None) is not None:
            continue
        if key in config:
            caster = type(default) if default is not None else str
            try:
                value = caster(config[key]) if caster is not bool else config[key].lower() in ("1", "true", "yes")
            except ValueError as exc:
                raise ConfigError(f"config key {key}: {exc}") from exc
            setattr(args, key, value)
        else:
            setattr(args, key, default)
    unknown = set(config) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return args


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ----------------------------------------------------------------------------- commands

CURVE_DEFAULTS = {"curve": "airy", "chi_max": 4, "order": 24, "out": None, "format": "json",
                  "u": None, "v": None, "max_dim": None}


def _build_curve(args) -> recursion.LocalSpectralCurve:
    if args.curve == "airy":
        return recursion.builtin_airy(args.order)
    if args.curve == "bessel":
        return recursion.builtin_bessel(args.order)
    if args.curve == "global":
        if not args.u or not args.v:
            raise ConfigError("--curve global needs --u and --v")
        return recursion.from_global_rational(args.u, args.v, args.order)
    raise ConfigError(f"unknown curve {args.curve!r}; use airy, bessel or global")


def cmd_curve_run(args) -> int:
    args = _merge_config(args, CURVE_DEFAULTS)
    if args.chi_max < 1:
        raise ConfigError("chi-max must be at least 1")
    if args.order < 4:
        raise ConfigError("order must be at least 4")
    if args.format not in ("json", "csv"):
        raise ConfigError("format must be json or csv")
    try:
        curve = _build_curve(args)
    except recursion.CurveError as exc:
        raise ConfigError(str(exc)) from exc
    table = recursion.compute_correlators(curve, args.chi_max, args.max_dim)
    report = recursion.check_invariants(table)
    text = json.dumps(correlators_to_json(table), indent=1) if args.format == "json" else correlators_to_csv(table)
    _emit(text, args.out)
    if not report.passed:
        print(json.dumps({"invariants": "failed", "problems": [str(p) for p in report.problems[:20]]}),
              file=sys.stderr)
        return EXIT_CHECK
    print(f"invariants passed for {len(table.sectors)} sectors", file=sys.stderr)
    return EXIT_OK


def _load_structure(selector: str, modes: int) -> airy.AiryTensors:
    if selector == "kw":
        return airy.build_kw(modes)
    if selector == "bgw":
        return airy.build_bgw(modes)
    if selector == "conic":
        return airy.conic_structure()
    if selector.startswith("file:"):
        path = selector[5:]
        try:
            return structure_from_json(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
    raise ConfigError(f"unknown structure {selector!r}; use kw, bgw, conic or file:PATH")


AIRY_DEFAULTS = {"structure": "kw", "modes": 21, "expand": None, "quantum": False, "chi_max": 3, "out": None}


def cmd_airy_check(args) -> int:
    args = _merge_config(args, AIRY_DEFAULTS)
    if args.modes < 1 or args.modes % 2 == 0:
        raise ConfigError("modes must be a positive odd integer")
    t = _load_structure(args.structure, args.modes)
    classical = airy.check_classical(t)
    quantum = airy.check_quantum(t)
    doc: Dict[str, Any] = {
        "classical": {"passed": classical.passed, "checked": classical.checked, "skipped": classical.skipped,
                      "first_failure": _jsonable(classical.first_failure)},
        "quantum": {"passed": quantum.passed, "checked": quantum.checked, "skipped": quantum.skipped,
                    "first_failure": _jsonable(quantum.first_failure)},
    }
    if args.expand:
        expansion = airy.classical_expand(t, args.expand)
        mode = t.modes[0]
        doc["expansion"] = {str(mode): [str(c) for c in expansion.coefficients(mode)]}
        doc["s0"] = [{"monomial": [_encode_label(l) for l in m], "value": str(v)}
                     for m, v in sorted(airy.potential_s0(t, args.expand).items(), key=str)]
    if args.quantum:
        tr = airy.abstract_tr(t, args.chi_max)
        doc["abstract_tr"] = [{"h": h, "n": n, "entries": [{"index": [_encode_label(l) for l in k], **encode_fraction(v)}
                                                          for k, v in sorted(e.items(), key=str)]}
                              for (h, n), e in sorted(tr.entries.items())]
    _emit(json.dumps(doc, indent=1), args.out)
    return EXIT_OK if classical.passed and quantum.passed else EXIT_CHECK


def cmd_airy_expand(args) -> int:
    if args.degree is None or args.degree < 2:
        raise ConfigError("degree must be at least 2")
    if args.conic:
        values = airy.conic_catalan(args.degree)
        print(",".join(str(v) for v in values))
        return EXIT_OK
    t = _load_structure(args.structure or "kw", args.modes or 21)
    expansion = airy.classical_expand(t, args.degree)
    for mode in t.modes:
        print(f"{mode}: " + ",".join(str(c) for c in expansion.coefficients(mode)))
    return EXIT_OK


def cmd_airy_export(args) -> int:
    t = _load_structure(args.structure, args.modes)
    _emit(json.dumps(structure_to_json(t), indent=1), args.out)
    return EXIT_OK


def cmd_cross_validate(args) -> int:
    args = _merge_config(args, {"chi_max": 4, "kernel_factor": "1"})
    if args.chi_max < 1:
        raise ConfigError("chi-max must be at least 1")
    factor = Fraction(args.kernel_factor)
    ok = True
    for variant in (virasoro.KW, virasoro.BGW):
        report = triple_comparison(variant, args.chi_max, factor)
        line = {"variant": variant, "passed": report.passed, "compared": report.compared}
        if report.first_mismatch:
            (h, n), idx, eo, tr, vir = report.first_mismatch
            line["first_mismatch"] = {"h": h, "n": n, "index": list(idx), "eo": str(eo), "abstract_tr": str(tr),
                                      "virasoro": None if vir is None else str(vir)}
        print(json.dumps(line))
        ok = ok and report.passed
    return EXIT_OK if ok else EXIT_CHECK


VIRASORO_DEFAULTS = {"variant": "kw", "max_weight": 7, "max_genus": 2, "out": None}


def cmd_virasoro_solve(args) -> int:
    args = _merge_config(args, VIRASORO_DEFAULTS)
    if args.variant not in (virasoro.KW, virasoro.BGW):
        raise ConfigError("variant must be kw or bgw")
    if args.max_weight < 0 or args.max_genus < 0:
        raise ConfigError("cutoffs must be nonnegative")
    table = virasoro.solve_by_recursion(args.variant, args.max_weight, args.max_genus)
    failures = virasoro.verify_annihilation(table)
    _emit(json.dumps(free_energy_to_json(table), indent=1), args.out)
    if failures:
        print(json.dumps({"annihilation": "failed", "first": str(failures[0])}), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


FAMILY_TOLERANCES = {
    "dm_cubic": 1e-6,
    "relat": 1e-8,
    "theta_a_period": 1e-10,
    "prepotential": 1e-6,
    "rauch": 1e-5,
    "bergman_symmetry": 1e-10,
    "bergman_a_period": 1e-8,
}


def family_report(curve: elliptic.QuarticCurve, step: float, tolerances: Mapping[str, float],
                  literal_signs: bool = False) -> Dict[str, Any]:
    """Run every period-variation check and compare residuals with tolerances.

    The gate uses the sign-consistent forms unless ``literal_signs`` is set;
    both residuals are always reported.
    """
    periods = elliptic.compute_periods(curve)
    residue = elliptic.dm_cubic_by_residue(curve, periods)
    fd = elliptic.dm_cubic_by_finite_difference(curve, step, periods)
    relat = elliptic.relation_check_relat(curve, periods)
    theta = elliptic.theta_series_check(curve)
    rauch = elliptic.rauch_check(curve, step)
    dm_residual = abs(fd.value - residue.value) / abs(residue.value)

    checks = {
        "dm_cubic": dm_residual,
        "relat": relat.residual_printed if literal_signs else relat.residual_derived,
        "theta_a_period": theta.a_period_error,
        "prepotential": theta.prepotential_printed_error if literal_signs else theta.prepotential_fd_error,
        "rauch": rauch.residual_printed if literal_signs else rauch.residual_derived,
        "bergman_symmetry": rauch.symmetry,
        "bergman_a_period": rauch.a_period,
    }
    results = {}
    floor_breach = []
    for name, value in checks.items():
        tol = tolerances[name]
        if tol < elliptic.NUMERIC_FLOOR:
            floor_breach.append(name)
        results[name] = {"residual": value, "tolerance": tol, "passed": bool(value <= tol)}
    theta_orders_ok = all(2.7 <= o <= 3.3 for o in theta.orders)
    results["theta_cubic_scaling"] = {"orders": theta.orders, "expected": 3, "passed": theta_orders_ok}
    passed = all(r["passed"] for r in results.values()) and not floor_breach
    return {
        "roots": [[r.real, r.imag] for r in curve.roots],
        "tau": [periods.tau.real, periods.tau.imag],
        "A": [periods.A.real, periods.A.imag],
        "B": [periods.B.real, periods.B.imag],
        "sign_convention": "printed" if literal_signs else "derived",
        "checks": results,
        "printed_form_residuals": {"relat": relat.residual_printed, "rauch": rauch.residual_printed,
                                   "prepotential": theta.prepotential_printed_error},
        "derived_form_residuals": {"relat": relat.residual_derived, "rauch": rauch.residual_derived,
                                   "prepotential": theta.prepotential_fd_error},
        "floor_breach": floor_breach and {
            "checks": floor_breach, "floor": elliptic.NUMERIC_FLOOR,
            "explanation": "requested tolerance is below the binary64 quadrature floor and cannot be certified"},
        "passed": passed,
    }


def _parse_roots(text: str) -> list[complex]:
    try:
        return [complex(s.strip().replace("i", "j")) for s in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse roots {text!r}") from exc


def cmd_family_check(args) -> int:
    args = _merge_config(args, {"q": None, "roots": None, "deform": "additive", "step": 1e-3, "tol": None,
                                "literal_signs": False, "out": None})
    if args.deform != "additive":
        raise ConfigError("only the additive deformation q - t is supported")
    if args.step <= 0:
        raise ConfigError("step must be positive")
    if (args.q is None) == (args.roots is None):
        raise ConfigError("give exactly one of --q or --roots")
    if args.q is not None:
        try:
            curve = elliptic.parse_quartic(args.q)
        except elliptic.DegenerateCurve:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    else:
        roots = _parse_roots(args.roots)
        if len(roots) != 4:
            raise ConfigError("exactly four branch points are required")
        curve = elliptic.QuarticCurve.from_roots(roots)
    tolerances = dict(FAMILY_TOLERANCES)
    if args.tol is not None:
        tolerances = {k: args.tol for k in tolerances}
    report = family_report(curve, args.step, tolerances, args.literal_signs)
    _emit(json.dumps(report, indent=1), args.out)
    return EXIT_OK if report["passed"] else EXIT_CHECK


def _jsonable(value):
    if value is None:
        return None
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value if isinstance(value, (int, float, str, bool)) else str(value)


# ----------------------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="airytr", description="Exact topological recursion and Airy structure toolkit.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    curve = groups.add_parser("curve", help="correlators of a spectral curve").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    run = curve.add_parser("run")
    run.add_argument("--curve")
    run.add_argument("--u")
    run.add_argument("--v")
    run.add_argument("--chi-max", type=int)
    run.add_argument("--max-dim", type=int)
    run.add_argument("--order", type=int)
    run.add_argument("--format")
    run.add_argument("--out")
    run.add_argument("--config")
    run.set_defaults(func=cmd_curve_run)

    airy_group = groups.add_parser("airy", help="Airy structure checks").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    check = airy_group.add_parser("check")
    check.add_argument("--structure")
    check.add_argument("--modes", type=int)
    check.add_argument("--expand", type=int)
    check.add_argument("--quantum", action="store_true", default=None)
    check.add_argument("--chi-max", type=int)
    check.add_argument("--out")
    check.add_argument("--config")
    check.set_defaults(func=cmd_airy_check)
    expand = airy_group.add_parser("expand")
    expand.add_argument("--conic", action="store_true")
    expand.add_argument("--structure")
    expand.add_argument("--modes", type=int)
    expand.add_argument("--degree", type=int, required=True)
    expand.set_defaults(func=cmd_airy_expand)
    export = airy_group.add_parser("export")
    export.add_argument("--structure", default="kw")
    export.add_argument("--modes", type=int, default=21)
    export.add_argument("--out")
    export.set_defaults(func=cmd_airy_export)

    cross = groups.add_parser("cross-validate", help="recursion vs abstract TR vs Virasoro")
    cross.add_argument("--chi-max", type=int)
    cross.add_argument("--kernel-factor", help=argparse.SUPPRESS)
    cross.add_argument("--config")
    cross.set_defaults(func=cmd_cross_validate)

    family = groups.add_parser("family", help="genus-one period variation checks").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    fcheck = family.add_parser("check")
    fcheck.add_argument("--q")
    fcheck.add_argument("--roots")
    fcheck.add_argument("--deform")
    fcheck.add_argument("--step", type=float)
    fcheck.add_argument("--tol", type=float)
    fcheck.add_argument("--literal-signs", action="store_true", default=None)
    fcheck.add_argument("--out")
    fcheck.add_argument("--config")
    fcheck.set_defaults(func=cmd_family_check)

    vir = groups.add_parser("virasoro", help="Virasoro constraint solver").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    solve = vir.add_parser("solve")
    solve.add_argument("--variant")
    solve.add_argument("--max-weight", type=int)
    solve.add_argument("--max-genus", type=int)
    solve.add_argument("--out")
    solve.add_argument("--config")
    solve.set_defaults(func=cmd_virasoro_solve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except elliptic.DegenerateCurve as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

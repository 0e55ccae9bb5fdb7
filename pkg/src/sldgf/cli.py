"""Command-line surface.

Subcommands: families, gf, wep, sld, verify, ce, fidelity, critical-lambda,
figure. All outputs are deterministic for fixed inputs; figures are CSV with
exact rationals rendered at 17 significant digits. Exit codes: 0 success,
1 verification mismatch, 2 usage errors (unknown subcommand or family,
malformed custom spec).
"""

from __future__ import annotations

import argparse
import csv
import functools
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import mpmath as mp

from .algebra import LaurentPoly3, series_coefficients, uni_reduce, uni_specialize
from .analysis import (NoThresholdError, critical_lambda,
                       critical_lambda_asymptotic, critical_lambda_sweep,
                       concentratable_entanglement, dominant_singularity,
                       fidelity_asymptotic, fidelity_sweep, to_rational)
from .family import (BUILTIN_FAMILIES, FamilyError, builtin,
                     parse_family_spec, realize, serialize_family_spec,
                     sld_from_wep)
from .oracle import sld_bruteforce_colouring, sld_bruteforce_stabilizer
from .transfer import build_transfer_system, family_gf, wep_by_iteration

FIG3_FAMILIES = ("path", "star", "cycle")
FIG3_LAMBDA = "0.8"
FIG4_FAMILIES = ("path", "star", "joint_squares")


def _rational_str(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _sig17(value) -> str:
    """Render a number at 17 significant digits (exact inputs stay exact
    up to that precision)."""
    with mp.workdps(30):
        if isinstance(value, Fraction):
            x = mp.mpf(value.numerator) / mp.mpf(value.denominator)
        else:
            x = mp.mpf(value)
        return mp.nstr(x, 17)


def _spec_key(args) -> str:
    """Cache key for the transfer system: the builtin name, or the
    validated custom document. Builtins rebuilt from the name keep their
    prefix graphs (a serialised round trip would drop them)."""
    if args.spec:
        try:
            text = Path(args.spec).read_text()
        except OSError as exc:
            raise FamilyError(f"cannot read spec file: {exc}") from exc
        return "json:" + serialize_family_spec(parse_family_spec(text))
    return "builtin:" + args.family


@functools.lru_cache(maxsize=8)
def _cached_system(spec_key: str):
    kind, _, payload = spec_key.partition(":")
    if kind == "builtin":
        return build_transfer_system(builtin(payload))
    return build_transfer_system(parse_family_spec(payload))


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _emit_json(obj) -> None:
    _emit(json.dumps(obj, indent=2))


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# -- subcommand implementations ------------------------------------------------


def _cmd_families(args) -> int:
    rows = []
    for name in BUILTIN_FAMILIES:
        spec = builtin(name)
        rows.append({"name": name,
                     "recursion_start": spec.recursion_start,
                     "qubit_count": {"offset": spec.qubit_offset,
                                     "step": spec.qubit_step}})
    if args.format == "json":
        _emit_json(rows)
    else:
        for row in rows:
            qc = row["qubit_count"]
            _emit(f"{row['name']}: n(r) = {qc['offset']} + {qc['step']}*r, "
                  f"recursion starts at r = {row['recursion_start']}")
    return 0


def _cmd_gf(args) -> int:
    gf = family_gf(_cached_system(_spec_key(args)))
    if args.format == "latex":
        _emit(gf.latex())
    elif args.format == "text":
        _emit(str(gf))
    else:
        _emit_json(gf.to_json())
    return 0


def _cmd_wep(args) -> int:
    wep = wep_by_iteration(_cached_system(_spec_key(args)), args.r)
    if args.format == "latex":
        _emit(wep.latex())
    elif args.format == "text":
        _emit(str(wep))
    elif args.format == "csv":
        rows = [[str(ey), _rational_str(c)] for (ex, ey, ez), c in
                sorted(wep.sorted_terms(), key=lambda t: t[0][1])]
        _emit(_csv_text(["k", "a_k"], rows))
    else:
        _emit_json(wep.to_json())
    return 0


def _cmd_sld(args) -> int:
    sld = sld_from_wep(wep_by_iteration(_cached_system(_spec_key(args)),
                                        args.r))
    if args.format == "csv":
        rows = [[str(k), str(a)] for k, a in enumerate(sld)]
        _emit(_csv_text(["k", "a_k"], rows))
    else:
        _emit_json(list(sld.sectors))
    return 0


def _verify_row(spec_key: str, r: int) -> dict:
    sys_ = _cached_system(spec_key)
    spec = sys_.spec
    wep = wep_by_iteration(sys_, r)
    row = {"r": r, "n": spec.qubit_count(r) if r >= 1 else 0,
           "iteration": wep.to_json(), "colouring": None, "stabilizer": None}
    try:
        graph = realize(spec, r)
    except FamilyError:
        return row
    row["n"] = graph.vertex_count
    row["colouring"] = list(sld_bruteforce_colouring(graph).sectors)
    row["stabilizer"] = list(sld_bruteforce_stabilizer(graph).sectors)
    return row


def _cmd_verify(args) -> int:
    spec_key = _spec_key(args)
    sys_ = _cached_system(spec_key)
    spec = sys_.spec
    r_max = 0
    r = 1
    while spec.qubit_count(r) <= args.max_qubits:
        r_max = r
        r += 1
    series = series_coefficients(family_gf(sys_), r_max)
    r_values = list(range(r_max + 1))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_verify_row, [spec_key] * len(r_values),
                                 r_values))
    else:
        rows = [_verify_row(spec_key, r) for r in r_values]
    table = []
    all_ok = True
    for row in rows:
        r = row["r"]
        series_sld = _sld_or_none(series[r])
        iter_sld = _sld_or_none(LaurentPoly3.from_json(row["iteration"]))
        checks = [series[r].to_json() == row["iteration"]]
        for key in ("colouring", "stabilizer"):
            if row[key] is not None:
                checks.append(row[key] == iter_sld)
        ok = all(checks)
        all_ok = all_ok and ok
        table.append({
            "r": r, "n": row["n"],
            "series": series_sld, "iteration": iter_sld,
            "colouring": row["colouring"], "stabilizer": row["stabilizer"],
            "agree": ok})
    if args.format == "json":
        _emit_json({"family": spec.name, "max_qubits": args.max_qubits,
                    "rows": table, "ok": all_ok})
    elif args.format == "csv":
        rows_csv = [[str(t["r"]), str(t["n"]), _fmt_sld(t["series"]),
                     _fmt_sld(t["iteration"]), _fmt_sld(t["colouring"]),
                     _fmt_sld(t["stabilizer"]), str(t["agree"]).lower()]
                    for t in table]
        _emit(_csv_text(["r", "n", "series", "iteration", "colouring",
                         "stabilizer", "agree"], rows_csv))
    else:
        _emit(f"family {spec.name}, members with at most {args.max_qubits} qubits")
        for t in table:
            _emit(f"  r={t['r']:<3} n={t['n']:<3} "
                  f"series={_fmt_sld(t['series'])} "
                  f"iteration={_fmt_sld(t['iteration'])} "
                  f"colouring={_fmt_sld(t['colouring'])} "
                  f"stabilizer={_fmt_sld(t['stabilizer'])} "
                  f"{'ok' if t['agree'] else 'MISMATCH'}")
        _emit("all agree" if all_ok else "MISMATCH FOUND")
    return 0 if all_ok else 1


def _sld_or_none(wep):
    try:
        return list(sld_from_wep(wep).sectors)
    except FamilyError:
        return None


def _fmt_sld(sld) -> str:
    if sld is None:
        return "-"
    return "[" + " ".join(str(a) for a in sld) + "]"


def _member_range(args, default_low: int = 0) -> list[int]:
    if args.r is not None:
        return [args.r]
    if args.r_max is not None:
        return list(range(default_low, args.r_max + 1))
    raise FamilyError("specify a member with -r or a sweep with --r-max")


def _cmd_ce(args) -> int:
    sys_ = _cached_system(_spec_key(args))
    rows = []
    for r in _member_range(args):
        cbar, cval = concentratable_entanglement(sys_, r)
        rows.append({"family": sys_.spec.name, "r": r,
                     "c_bar": _rational_str(cbar), "c": _rational_str(cval)})
    if args.format == "csv":
        _emit(_csv_text(["family", "r", "c_bar", "c"],
                        [[row["family"], str(row["r"]), row["c_bar"],
                          row["c"]] for row in rows]))
    else:
        _emit_json(rows if args.r is None else rows[0])
    return 0


def _asymptotic_fields(sys_, lam: Fraction, r: int) -> dict:
    approx = fidelity_asymptotic(sys_, lam, r)
    gf = family_gf(sys_)
    pz, qz = uni_reduce(*uni_specialize(gf, Fraction(1, 2), lam / 2))
    report = dominant_singularity(qz)
    return {"F_approx": float(approx),
            "z_star": float(mp.re(report.z_star)),
            "gap": float(report.modulus_gap)}


def _fidelity_row(spec_key: str, lam_str: str, r: int,
                  asymptotic: bool) -> dict:
    sys_ = _cached_system(spec_key)
    lam = to_rational(lam_str)
    exact = fidelity_sweep(sys_, lam, r)[r]
    row = {"family": sys_.spec.name, "r": r, "lambda": lam_str,
           "F_exact": _rational_str(exact), "F_approx": None,
           "z_star": None, "gap": None}
    if asymptotic:
        row.update(_asymptotic_fields(sys_, lam, r))
    return row


def _cmd_fidelity(args) -> int:
    spec_key = _spec_key(args)
    sys_ = _cached_system(spec_key)
    lam = to_rational(args.lam)
    r_values = _member_range(args)
    if args.asymptotic and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_fidelity_row, [spec_key] * len(r_values),
                                 [args.lam] * len(r_values), r_values,
                                 [True] * len(r_values)))
    else:
        exact = fidelity_sweep(sys_, lam, max(r_values))
        rows = []
        for r in r_values:
            row = {"family": sys_.spec.name, "r": r, "lambda": args.lam,
                   "F_exact": _rational_str(exact[r]), "F_approx": None,
                   "z_star": None, "gap": None}
            if args.asymptotic:
                row.update(_asymptotic_fields(sys_, lam, r))
            rows.append(row)
    if args.format == "csv":
        header = ["family", "r", "lambda", "F_exact", "F_approx", "z_star",
                  "gap"]
        body = [[row["family"], str(row["r"]), row["lambda"], row["F_exact"],
                 "" if row["F_approx"] is None else repr(row["F_approx"]),
                 "" if row["z_star"] is None else repr(row["z_star"]),
                 "" if row["gap"] is None else repr(row["gap"])]
                for row in rows]
        _emit(_csv_text(header, body))
    else:
        _emit_json(rows if args.r is None else rows[0])
    return 0


def _critical_row(spec_key: str, r: int, tol: float) -> dict:
    sys_ = _cached_system(spec_key)
    return {"r": r, "value": critical_lambda(sys_, r, tol)}


def _critical_entries(spec_key: str, r_values: list[int], tol: float,
                      jobs: int) -> list[dict]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_critical_row, [spec_key] * len(r_values),
                                 r_values, [tol] * len(r_values)))
    sys_ = _cached_system(spec_key)
    return [{"r": r, "value": value}
            for r, value in critical_lambda_sweep(sys_, r_values, tol)]


def _cmd_critical_lambda(args) -> int:
    spec_key = _spec_key(args)
    sys_ = _cached_system(spec_key)
    r_values = _member_range(args, default_low=1)
    entries = _critical_entries(spec_key, r_values, args.tol, args.jobs)
    approx = None
    if args.asymptotic:
        try:
            approx = critical_lambda_asymptotic(sys_, args.tol)
        except NoThresholdError:
            approx = None
    result = {"family": sys_.spec.name, "lambda_c": entries,
              "lambda_c_approx": approx}
    if args.format == "csv":
        rows = [[sys_.spec.name, str(e["r"]),
                 "" if e["value"] is None else repr(e["value"]),
                 "" if approx is None else repr(approx)] for e in entries]
        _emit(_csv_text(["family", "r", "lambda_c", "lambda_c_approx"], rows))
    else:
        _emit_json(result)
    return 0


def _cmd_figure(args) -> int:
    if args.which == "fig3":
        r_max = args.r_max if args.r_max is not None else 60
        header = ["family", "r", "n", "lambda", "f_exact", "f_approx", "delta"]
        rows = []
        lam = to_rational(FIG3_LAMBDA)
        for name in FIG3_FAMILIES:
            sys_ = _cached_system("builtin:" + name)
            exact = fidelity_sweep(sys_, lam, r_max)
            for r in range(1, r_max + 1):
                approx = fidelity_asymptotic(sys_, lam, r)
                with mp.workdps(40):
                    ex = mp.mpf(exact[r].numerator) / exact[r].denominator
                    delta = abs(ex - approx)
                rows.append([name, str(r), str(sys_.spec.qubit_count(r)),
                             FIG3_LAMBDA, _sig17(exact[r]), _sig17(approx),
                             _sig17(delta)])
        text = _csv_text(header, rows)
        filename = "fig3.csv"
    else:
        r_max = args.r_max if args.r_max is not None else 100
        header = ["family", "r", "n", "lambda_c", "lambda_c_approx"]
        rows = []
        for name in FIG4_FAMILIES:
            spec_key = "builtin:" + name
            sys_ = _cached_system(spec_key)
            try:
                approx_str = _sig17(critical_lambda_asymptotic(sys_))
            except NoThresholdError:
                approx_str = ""
            entries = _critical_entries(spec_key, list(range(1, r_max + 1)),
                                        1e-10, args.jobs)
            for entry in entries:
                value = entry["value"]
                rows.append([name, str(entry["r"]),
                             str(sys_.spec.qubit_count(entry["r"])),
                             "" if value is None else _sig17(value),
                             approx_str])
        text = _csv_text(header, rows)
        filename = "fig4.csv"
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / filename
        target.write_text(text)
        _emit(str(target))
    else:
        _emit(text)
    return 0


# -- argument parsing ----------------------------------------------------------


def _add_family_args(sub) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--family", choices=BUILTIN_FAMILIES,
                       help="built-in family name")
    group.add_argument("--spec", help="path to a custom family spec JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sldgf",
        description="Exact sector-length generating functions for recursively "
                    "definable graph-state families")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("families", help="list built-in families")
    sub.add_argument("--format", choices=("json", "text"), default="text")
    sub.set_defaults(func=_cmd_families)

    sub = subs.add_parser("gf", help="emit the family generating function")
    _add_family_args(sub)
    sub.add_argument("--format", choices=("json", "latex", "text"),
                     default="json")
    sub.set_defaults(func=_cmd_gf)

    sub = subs.add_parser("wep", help="weight enumerator of one member")
    _add_family_args(sub)
    sub.add_argument("-r", type=int, required=True, help="member index")
    sub.add_argument("--format", choices=("json", "csv", "latex", "text"),
                     default="json")
    sub.set_defaults(func=_cmd_wep)

    sub = subs.add_parser("sld", help="sector lengths of one member")
    _add_family_args(sub)
    sub.add_argument("-r", type=int, required=True, help="member index")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.set_defaults(func=_cmd_sld)

    sub = subs.add_parser(
        "verify",
        help="cross-check series, iteration, and both brute-force oracles")
    _add_family_args(sub)
    sub.add_argument("--max-qubits", type=int, default=16)
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--format", choices=("text", "csv", "json"),
                     default="text")
    sub.set_defaults(func=_cmd_verify)

    sub = subs.add_parser("ce", help="concentratable entanglement")
    _add_family_args(sub)
    sub.add_argument("-r", type=int, default=None, help="member index")
    sub.add_argument("--r-max", type=int, default=None, help="sweep 0..r_max")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.set_defaults(func=_cmd_ce)

    sub = subs.add_parser("fidelity", help="depolarizing-noise fidelity")
    _add_family_args(sub)
    sub.add_argument("-r", type=int, default=None, help="member index")
    sub.add_argument("--r-max", type=int, default=None, help="sweep 0..r_max")
    sub.add_argument("--lambda", dest="lam", required=True,
                     help="noise parameter as a decimal string")
    sub.add_argument("--asymptotic", action="store_true",
                     help="include the dominant-singularity approximation")
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.set_defaults(func=_cmd_fidelity)

    sub = subs.add_parser("critical-lambda",
                          help="critical noise parameter of the purity criterion")
    _add_family_args(sub)
    sub.add_argument("-r", type=int, default=None, help="member index")
    sub.add_argument("--r-max", type=int, default=None, help="sweep 1..r_max")
    sub.add_argument("--asymptotic", action="store_true",
                     help="include the member-independent limit")
    sub.add_argument("--tol", type=float, default=1e-10)
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.set_defaults(func=_cmd_critical_lambda)

    sub = subs.add_parser("figure", help="reproduce figure data series as CSV")
    sub.add_argument("which", choices=("fig3", "fig4"))
    sub.add_argument("--out", default=None, help="directory for the CSV file")
    sub.add_argument("--r-max", type=int, default=None)
    sub.add_argument("--jobs", type=int, default=1)
    sub.set_defaults(func=_cmd_figure)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FamilyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

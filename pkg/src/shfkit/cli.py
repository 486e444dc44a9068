"""Command-line entry point ``shfkit``.

Exit codes: 0 all checks pass, 1 validation or tolerance failure, 2 usage error
or malformed input.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import acceptance, report
from .catalog import families, regions, roots
from .errors import ShfError
from .invlie import abelian, from_json_dict
from .su3 import structure_from_json, validation_report
from .torsion import ricci_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SCAN_COLUMNS = ("a", "b", "q", "scal", "nu_norm", "in_V_SHF")
DEFAULT_STEPS = 41


class UsageError(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(prog="shfkit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "csv", "text"),
                        help="default: csv for scan, text otherwise")
    common.add_argument("--out", dest="out_path", help="write the report here instead of stdout")
    common.add_argument("--tol", type=float, default=1e-9)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="validate an (omega, psi) JSON file")
    p.add_argument("--input", dest="input_path", required=True)

    p = sub.add_parser("catalog", parents=[common], help="report one catalog family point")
    p.add_argument("--family", choices=roots.FAMILIES, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float)

    p = sub.add_parser("scan", parents=[common], help="CSV scan over a parameter grid")
    p.add_argument("--family", choices=roots.FAMILIES, default="su21")
    p.add_argument("--grid", nargs=3, action="append", metavar=("MIN", "MAX", "STEPS"),
                   help="su21: two triples for (a, b), or one triple of the ray parameter "
                        "t in [1, 2) with --on-slice; so41: one triple for a")
    p.add_argument("--on-slice", action="store_true", help="sample V_SHF along its ray parameter")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("regen", parents=[common], help="regenerate structure constants and diff")
    p.add_argument("--family", choices=roots.FAMILIES, action="append")
    p.add_argument("--write-dir", help="also write the regenerated files into this directory")

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--checks", help="comma-separated subset, e.g. 1,2,data")
    return parser


def _emit(text, out_path):
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


# verify -------------------------------------------------------------------

def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path} at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from exc


def _algebra_from(spec):
    if spec is None:
        return None
    if isinstance(spec, str):
        if spec == "abelian":
            return abelian()
        if spec in roots.FAMILIES:
            return families.load_algebra(spec)
        raise UsageError(f"unknown algebra {spec!r}")
    alg = from_json_dict(spec)
    alg.verify()
    return alg


def cmd_verify(args):
    data = _read_json(args.input_path)
    if not isinstance(data, dict):
        raise UsageError("input JSON must be an object with 'omega' and 'psi'")
    try:
        omega, psi = structure_from_json(data)
    except ShfError as exc:
        raise UsageError(str(exc)) from exc
    alg = _algebra_from(data.get("algebra"))
    val, s = validation_report(omega, psi, tol=args.tol)
    out = {"input": str(args.input_path), "validation": val}
    code = EXIT_OK if s is not None else EXIT_FAIL
    if s is not None and alg is not None:
        try:
            rep = ricci_report(s, alg, tol=args.tol)
        except ShfError as exc:
            out["torsion_error"] = {"type": type(exc).__name__, "message": str(exc),
                                    "residual": exc.residual, **exc.details}
            code = EXIT_FAIL
        else:
            out["torsion"] = report.torsion_dict(rep, s)
            out["failures"] = report.shf_failures(rep, s, args.tol)
            if out["failures"]:
                code = EXIT_FAIL
    out["passed"] = code == EXIT_OK
    return out, code


# catalog ------------------------------------------------------------------

def cmd_catalog(args):
    if args.family == "su21" and args.b is None:
        raise UsageError("catalog --family su21 needs --b")
    try:
        out = report.family_report(args.family, args.a, args.b, tol=args.tol)
    except ShfError as exc:
        return {"passed": False, "error": {"type": type(exc).__name__, "message": str(exc),
                                           "residual": exc.residual, **exc.details}}, EXIT_FAIL
    return out, EXIT_OK if out["passed"] else EXIT_FAIL


# scan ---------------------------------------------------------------------

def _triple(t):
    lo, hi, steps = float(t[0]), float(t[1]), int(t[2])
    if steps < 1 or not np.isfinite([lo, hi]).all():
        raise UsageError(f"bad grid triple {t}")
    return np.linspace(lo, hi, steps)


def scan_points(family, grid=None, on_slice=False):
    """Ordered ``(a, b)`` points of a scan; ``b`` is None for so41."""
    if family == "so41":
        if not grid or len(grid) != 1:
            raise UsageError("so41 scan needs exactly one --grid MIN MAX STEPS triple for a")
        return [(float(a), None) for a in _triple(grid[0])]
    if on_slice:
        ts = _triple(grid[0]) if grid else np.linspace(1.0, regions.T_MAX, DEFAULT_STEPS)
        if grid and len(grid) != 1:
            raise UsageError("--on-slice takes one --grid triple")
        if ts.min() < 1.0 or ts.max() >= 2.0:
            raise UsageError("ray parameter t must lie in [1, 2)")
        return [regions.v_shf_point(t) for t in ts]
    if grid:
        if len(grid) != 2:
            raise UsageError("su21 rectangle scan needs two --grid triples (a, then b)")
        a_vals, b_vals = _triple(grid[0]), _triple(grid[1])
    else:
        a0, a1, b0, b1 = regions.v_shf_bounding_box()
        a_vals = np.linspace(a0, a1, DEFAULT_STEPS)
        b_vals = np.linspace(b0, b1, DEFAULT_STEPS)
    return [(float(a), float(b)) for a in a_vals for b in b_vals]


def scan_row(family, a, b, tol=1e-9):
    row = {"a": a, "b": b, "q": None, "scal": None, "nu_norm": None, "in_V_SHF": False}
    if family == "su21":
        region = regions.classify_region(a, b)
        row["in_V_SHF"] = region.in_V_SHF
        if not region.in_Q:
            return row
    elif a == 0.0:
        return row
    try:
        alg, s, point = families.build(family, a, b, tol=tol)
        rep = ricci_report(s, alg, tol=tol)
    except ShfError:
        # numerically degenerate near the boundary of Q; leave the row blank
        return row
    row.update(q=point.q, scal=rep.scal, nu_norm=rep.residuals["nu_norm"])
    return row


def _scan_row_args(args):
    return scan_row(*args)


def cmd_scan(args):
    points = scan_points(args.family, args.grid, args.on_slice)
    work = [(args.family, a, b, args.tol) for a, b in points]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_row_args, work, chunksize=16))
    else:
        rows = [scan_row(*w) for w in work]
    return rows, EXIT_OK


# regen --------------------------------------------------------------------

def cmd_regen(args):
    out = {"data_dir": str(families.data_dir()), "families": {}}
    code = EXIT_OK
    for family in args.family or roots.FAMILIES:
        alg = roots.regenerate(family)
        path = families.data_path(family)
        diff = families.compare_with_shipped(family, path) if path.exists() else None
        entry = {"N2": alg.meta["N2"], "max_abs_diff": diff,
                 "matches": diff is not None and diff <= families.SHIPPED_TOL}
        if args.write_dir:
            entry["written"] = str(families.write_data(family, args.write_dir))
        if not entry["matches"]:
            code = EXIT_FAIL
        out["families"][family] = entry
    out["passed"] = code == EXIT_OK
    return out, code


# selftest -----------------------------------------------------------------

def cmd_selftest(args):
    keys = None if not args.checks else [k.strip() for k in args.checks.split(",") if k.strip()]
    try:
        results = acceptance.run(keys)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    passed = all(r.passed for r in results)
    return results, EXIT_OK if passed else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "catalog": cmd_catalog, "scan": cmd_scan,
            "regen": cmd_regen, "selftest": cmd_selftest}


def _render(command, payload, fmt):
    if command == "scan":
        if fmt == "csv":
            return report.dumps_csv(payload, SCAN_COLUMNS)
        return report.render({"rows": payload}, fmt)
    if command == "selftest":
        if fmt == "text":
            lines = [r.line() for r in payload]
            failed = [r.key for r in payload if not r.passed]
            lines.append(f"{len(payload) - len(failed)}/{len(payload)} checks passed"
                         + (f"; failed: {', '.join(failed)}" if failed else ""))
            return "\n".join(lines) + "\n"
        return report.render({r.key: {"title": r.title, "passed": r.passed, "detail": r.detail}
                              for r in payload}, fmt)
    return report.render(payload, fmt)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        payload, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"shfkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    fmt = args.output or ("csv" if args.command == "scan" else "text")
    _emit(_render(args.command, payload, fmt), args.out_path)
    if code == EXIT_FAIL and args.command in ("verify", "catalog", "regen"):
        failures = (payload.get("failures") or payload.get("error") or payload.get("torsion_error")
                    or payload.get("validation", {}).get("error") or payload.get("families"))
        print(f"shfkit {args.command}: FAILED {json.dumps(report.to_plain(failures), sort_keys=True)}",
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

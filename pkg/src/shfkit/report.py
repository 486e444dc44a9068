"""JSON, CSV and text rendering of reports with deterministic number formatting."""

import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass

import numpy as np

from .catalog import families, regions
from .forms6 import KForm, metric_norm, to_json
from .torsion import SHF_TOL, ricci_report

JSON_DIGITS = 17
TEXT_DIGITS = 12


def _round(x, digits):
    return float(format(x, f".{digits}g"))


def to_plain(obj, digits=JSON_DIGITS):
    """Recursively convert reports to JSON-ready Python values; non-finite floats become None."""
    if isinstance(obj, KForm):
        return to_plain(to_json(obj), digits)
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_plain(asdict(obj) if not hasattr(obj, "as_dict") else obj.as_dict(), digits)
    if isinstance(obj, dict):
        return {str(k): to_plain(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj) + 0.0  # no negative zero in output
        return _round(x, digits) if math.isfinite(x) else None
    return obj


def dumps_json(obj):
    return json.dumps(to_plain(obj, JSON_DIGITS), sort_keys=True, indent=2) + "\n"


def _num_text(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, f".{TEXT_DIGITS}g")
    return str(v)


def flatten(obj, prefix=""):
    """``[(dotted_key, value)]`` in sorted key order."""
    plain = to_plain(obj, TEXT_DIGITS)
    out = []

    def walk(x, key):
        if isinstance(x, dict):
            for k in sorted(x):
                walk(x[k], f"{key}.{k}" if key else k)
        elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
            for i, v in enumerate(x):
                walk(v, f"{key}.{i}")
        else:
            out.append((key, x))
    walk(plain, prefix)
    return out


def dumps_text(obj):
    lines = []
    for k, v in flatten(obj):
        if isinstance(v, list):
            v = " ".join(_num_text(x) for x in v)
        lines.append(f"{k}: {_num_text(v)}")
    return "\n".join(lines) + "\n"


def dumps_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_num_text(to_plain(row.get(c), TEXT_DIGITS)) for c in columns])
    return buf.getvalue()


def dumps_pairs_csv(obj):
    rows = [{"key": k, "value": " ".join(map(_num_text, v)) if isinstance(v, list) else v}
            for k, v in flatten(obj)]
    return dumps_csv(rows, ["key", "value"])


def render(obj, fmt):
    if fmt == "json":
        return dumps_json(obj)
    if fmt == "text":
        return dumps_text(obj)
    if fmt == "csv":
        return dumps_pairs_csv(obj)
    raise ValueError(f"unknown output format {fmt!r}")


def torsion_dict(rep, s):
    return {
        "sigma": rep.sigma,
        "sigma_norm2": rep.sigma_norm2,
        "nu": rep.nu,
        "nu_norm": metric_norm(rep.nu, s.g),
        "scal": rep.scal,
        "ric0_plus_rep": rep.ric0_plus_rep,
        "ric0_minus_rep": rep.ric0_minus_rep,
        "torsion_free": rep.torsion_free,
        "j_hermitian_ricci": rep.j_hermitian_ricci,
        "dsigma_psi_coeff": rep.dsigma_psi_coeff,
        "residuals": rep.residuals,
    }


def shf_failures(rep, s, tol):
    """Named residuals of a torsion report that exceed their thresholds."""
    scale = max(1.0, metric_norm(s.psi, s.g))
    limits = {"d_omega": SHF_TOL * scale, "d_psi": SHF_TOL * scale,
              "sigma_solve": tol * scale, "sigma_coclosed": tol * scale}
    return {k: rep.residuals[k] for k, lim in limits.items() if rep.residuals[k] > lim}


def structure_dict(s):
    return {"omega": s.omega, "psi": s.psi, "psihat": s.psihat, "J": s.J, "g": s.g, "P": s.P,
            "validation_residuals": s.residuals}


def family_report(family, a, b=None, tol=1e-9):
    """Full report for one catalog point; ``report["passed"]`` summarizes the checks."""
    alg, s, point = families.build(family, a, b, tol=tol)
    rep = ricci_report(s, alg, tol=tol)
    failures = shf_failures(rep, s, tol)
    N2 = float(alg.meta["N2"])
    out = {"family": family, "a": point.a, "q": point.q, "delta": point.delta,
           "N2": N2, "structure": structure_dict(s),
           "torsion": torsion_dict(rep, s), "failures": failures, "passed": not failures}
    if family == "su21":
        out["b"] = point.b
        out["region"] = point.region.as_dict()
        out["scal_homogeneous_formula"] = regions.scal_homogeneous(point.a, point.b, N2)
    return out

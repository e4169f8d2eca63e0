"""JSON and CSV encodings for matrices, verdicts, wavelet specs and reports.

Floats are written by ``json`` with ``repr``, the shortest string that
parses back to the same double, so every document round-trips exactly.
Non-finite floats are written as ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .admit import Criterion, Status, Verdict
from .errors import InvalidInputError, ParseError
from .matkit import as_matrix
from .verify import DeltaReport, DeltaSample, GrowthTable
from .wavelet import (
    IndicatorWavelet,
    ProfileWavelet,
    TransportedWavelet,
    default_profile,
    tabulated_profile,
)

__all__ = [
    "delta_report_from_json",
    "delta_report_to_json",
    "dumps",
    "growth_table_from_json",
    "growth_table_to_json",
    "load_json",
    "matrix_from_json",
    "matrix_to_json",
    "verdict_from_json",
    "verdict_to_json",
    "wavelet_from_json",
    "wavelet_to_json",
    "write_csv",
]


def _plain(obj):
    # numpy scalars/arrays and tuples to plain JSON values
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, allow_nan=False)


def load_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), f"invalid JSON at line {exc.lineno}: {exc.msg}") from None


def _require(obj, key, where):
    if not isinstance(obj, dict):
        raise ParseError(where, "expected an object")
    if key not in obj:
        raise ParseError(f"{where}.{key}", "missing")
    return obj[key]


def _float(x, where) -> float:
    if x is None:
        return math.inf
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(where, f"expected a number, got {x!r}")
    return float(x)


# --- matrices ------------------------------------------------------------------


def matrix_to_json(X) -> dict:
    X = np.asarray(X, dtype=float)
    return {"n": int(X.shape[0]), "rows": X.tolist()}


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    """Accept ``{"n": n, "rows": [[...], ...]}`` or a bare list of rows."""
    rows = obj
    if isinstance(obj, dict):
        rows = _require(obj, "rows", where)
        where = f"{where}.rows"
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(where, "expected a list of rows")
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x is None or isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError(f"{where}[{i}][{j}]", f"expected a finite number, got {x!r}")
    try:
        X = as_matrix(rows)
    except ValueError as exc:
        raise ParseError(where, str(exc)) from None
    if isinstance(obj, dict) and "n" in obj and obj["n"] != X.shape[0]:
        raise ParseError(f"{where[:-5]}.n", f"says {obj['n']} but there are {X.shape[0]} rows")
    return X


# --- verdicts ------------------------------------------------------------------


def verdict_to_json(v: Verdict) -> dict:
    return {
        "status": v.status.value,
        "criterion": None if v.criterion is None else v.criterion.value,
        "certificate": _plain(v.certificate),
        "rationale": v.rationale,
    }


def verdict_from_json(obj) -> Verdict:
    try:
        status = Status(_require(obj, "status", "verdict"))
    except ValueError:
        raise ParseError("verdict.status", f"unknown status {obj['status']!r}") from None
    crit = obj.get("criterion")
    try:
        crit = None if crit is None else Criterion(crit)
    except ValueError:
        raise ParseError("verdict.criterion", f"unknown criterion {crit!r}") from None
    return Verdict(status, crit, dict(obj.get("certificate", {})), obj.get("rationale", ""))


# --- wavelet specs -------------------------------------------------------------


def wavelet_to_json(w) -> dict:
    if isinstance(w, ProfileWavelet):
        p = w.profile
        if p.table is not None:
            prof = {"name": "tabulated", "t": list(p.table[0]), "values": list(p.table[1])}
        elif p.name == "raised-sine":
            prof = {"name": p.name}
        else:
            raise InvalidInputError(f"profile {p.name!r} is a Python callable and has no JSON form; "
                                    "use a tabulated profile")
        return {"kind": "profile", "generator": matrix_to_json(w.generator), "profile": prof,
                "support_N": p.N}
    if isinstance(w, IndicatorWavelet):
        return {"kind": "indicator", "D": matrix_to_json(w.generator),
                "permutation": [int(i) for i in w.permutation], "reversed": bool(w.reversed)}
    if isinstance(w, TransportedWavelet):
        return {"kind": "transported", "base": wavelet_to_json(w.base),
                "S": matrix_to_json(w.S)}
    raise TypeError(f"not a wavelet spec: {type(w).__name__}")


def _profile_from_json(obj, where):
    name = _require(obj, "name", where)
    if name == "raised-sine":
        return default_profile()
    if name == "tabulated":
        ts = [_float(x, f"{where}.t") for x in _require(obj, "t", where)]
        vs = [_float(x, f"{where}.values") for x in _require(obj, "values", where)]
        try:
            return tabulated_profile(ts, vs)
        except ValueError as exc:
            raise ParseError(where, str(exc)) from None
    raise ParseError(f"{where}.name", f"unknown profile {name!r}")


def wavelet_from_json(obj, where: str = "wavelet"):
    kind = _require(obj, "kind", where)
    try:
        if kind == "profile":
            X = matrix_from_json(_require(obj, "generator", where), f"{where}.generator")
            profile = _profile_from_json(_require(obj, "profile", where), f"{where}.profile")
            return ProfileWavelet.from_generator(X, profile)
        if kind == "indicator":
            w = IndicatorWavelet.from_diagonal(matrix_from_json(_require(obj, "D", where),
                                                                f"{where}.D"))
            if "permutation" in obj and list(obj["permutation"]) != w.permutation.tolist():
                raise ParseError(f"{where}.permutation", "does not match the diagonal")
            if "reversed" in obj and bool(obj["reversed"]) != w.reversed:
                raise ParseError(f"{where}.reversed", "does not match the trace sign")
            return w
        if kind == "transported":
            base = wavelet_from_json(_require(obj, "base", where), f"{where}.base")
            S = matrix_from_json(_require(obj, "S", where), f"{where}.S")
            return TransportedWavelet.from_similarity(base, S)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(where, str(exc)) from None
    raise ParseError(f"{where}.kind", f"unknown wavelet kind {kind!r}")


# --- reports -------------------------------------------------------------------


def delta_report_to_json(r: DeltaReport) -> dict:
    worst = r.samples[r.worst]
    return {
        "seed": r.seed,
        "tol": r.tol,
        "max_abs_deviation": r.max_abs_deviation,
        "within_tolerance": r.within_tolerance,
        "quadrature": _plain(r.quadrature),
        "worst": {"xi": _plain(worst.xi), "delta": worst.delta, "err": worst.error},
        "samples": [{"xi": _plain(s.xi), "delta": s.delta, "err": s.error} for s in r.samples],
    }


def delta_report_from_json(obj) -> DeltaReport:
    samples = [DeltaSample(np.asarray(s["xi"], dtype=float), float(s["delta"]), float(s["err"]))
               for s in _require(obj, "samples", "report")]
    quad = dict(_require(obj, "quadrature", "report"))
    if "t_range" in quad:
        quad["t_range"] = [_float(x, "report.quadrature.t_range") for x in quad["t_range"]]
    return DeltaReport(samples, float(obj["max_abs_deviation"]), quad, int(obj["seed"]),
                       float(obj["tol"]))


def growth_table_to_json(g: GrowthTable) -> dict:
    return {
        "kind": g.kind,
        "radii": _plain(g.radii),
        "masses": _plain(g.masses),
        "fitted_exponent": g.fitted_exponent,
        "fit_quality": g.fit_quality,
        "expected_exponent": g.expected_exponent,
        "orbit_deltas": _plain(g.orbit_deltas),
    }


def growth_table_from_json(obj) -> GrowthTable:
    return GrowthTable(
        obj["kind"], np.asarray(obj["radii"], dtype=float), np.asarray(obj["masses"], dtype=float),
        float(obj["fitted_exponent"]), float(obj["fit_quality"]),
        float(obj["expected_exponent"]), np.asarray(obj.get("orbit_deltas", []), dtype=float),
    )


def write_csv(header, rows, path=None) -> str:
    """Rows as CSV with 17 significant digits; returns the text, also written to ``path``."""
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(header)
    for row in rows:
        out.writerow([format(float(x), ".17g") if isinstance(x, (float, np.floating)) else x
                      for x in row])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def delta_report_rows(r: DeltaReport):
    n = len(r.samples[0].xi)
    header = [f"xi_{i}" for i in range(n)] + ["delta", "err"]
    return header, [[*map(float, s.xi), s.delta, s.error] for s in r.samples]


def growth_table_rows(g: GrowthTable):
    return ["R", "mass"], [[float(R), float(m)] for R, m in zip(g.radii, g.masses)]

"""Command-line entry point: ``dilwave <command> [options]``.

Commands::

    check        decide admissibility of --matrix; exit 0/1/2 = Admissible/NotAdmissible/Unknown
    construct    build a wavelet spec for an admissible --matrix (optionally --similarity)
    delta        Calderon sweep of --wavelet; exit 3 if any sample misses --tol
    probe        divergence growth tables (--kind trace-zero|rotation|shear) or Lie rate (lie)
    reconstruct  frequency-domain reconstruction error of --wavelet on a Gaussian bump
    orbit        CSV of an orbit t -> e^{tX} v of --matrix

The JSON report goes to stdout (and to --out when --format json); with
--format csv the table goes to --out. Input or usage errors exit 64.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as dio
from .admit import (
    Criterion,
    Status,
    criterion_diagonal_trace,
    criterion_symmetric_part,
    decide,
)
from .errors import DilwaveError, ParseError
from .matkit import mat_exp
from .verify import (
    Grid,
    delta_sweep,
    divergence_probe,
    gaussian_bump,
    lie_convergence_probe,
    reconstruction_check,
)
from .wavelet import IndicatorWavelet, ProfileWavelet, TransportedWavelet

__all__ = ["RunConfig", "main"]

EXIT_OK, EXIT_NOT_ADMISSIBLE, EXIT_UNKNOWN, EXIT_BREACH, EXIT_NO_CONSTRUCTION = 0, 1, 2, 3, 4
EXIT_USAGE = 64
EXIT_NUMERIC = 70

COMMANDS = ("check", "construct", "delta", "probe", "reconstruct", "orbit")
DEFAULT_RADII = (1, 2, 4, 8, 16, 32, 64)
DEFAULT_M = (8, 16, 32, 64, 128, 256, 512, 1024)


@dataclass(frozen=True)
class RunConfig:
    command: str
    matrix: Path | None = None
    wavelet: Path | None = None
    similarity: Path | None = None
    kind: str | None = None
    tol: float = 1e-6
    samples: int = 100
    seed: int = 42
    out: Path | None = None
    format: str = "json"
    max_error: float = 1e-4

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParseError("command", f"unknown command {self.command!r}")
        if not self.tol > 0:
            raise ParseError("--tol", "must be positive")
        if self.samples < 1:
            raise ParseError("--samples", "must be at least 1")
        if self.format not in ("json", "csv"):
            raise ParseError("--format", "must be json or csv")
        for name in ("matrix", "wavelet", "similarity"):
            path = getattr(self, name)
            if path is not None and not Path(path).is_file():
                raise ParseError(f"--{name}", f"no such file {path}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dilwave", description="Admissibility and Calderon checks for matrix "
                "dilation groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tol_default):
        sp.add_argument("--tol", type=float, default=tol_default)
        sp.add_argument("--out", type=Path)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("check", help="decide admissibility")
    sp.add_argument("--matrix", type=Path, required=True)
    common(sp, 1e-9)

    sp = sub.add_parser("construct", help="build a wavelet spec")
    sp.add_argument("--matrix", type=Path, required=True)
    sp.add_argument("--similarity", type=Path,
                    help="matrix S with S^{-1} X S diagonal; builds a transported wavelet")
    common(sp, 1e-9)

    sp = sub.add_parser("delta", help="Calderon sweep")
    sp.add_argument("--wavelet", type=Path, required=True)
    sp.add_argument("--matrix", type=Path, help="group generator (defaults to the wavelet's)")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=42)
    common(sp, 1e-6)

    sp = sub.add_parser("probe", help="divergence or Lie-product probes")
    sp.add_argument("--kind", required=True, choices=("trace-zero", "rotation", "shear", "lie"))
    sp.add_argument("--matrix", type=Path, help="diagonal D for trace-zero (default diag(1,-1))")
    common(sp, 1e-6)

    sp = sub.add_parser("reconstruct", help="frequency-domain reconstruction check")
    sp.add_argument("--wavelet", type=Path, required=True)
    sp.add_argument("--matrix", type=Path)
    sp.add_argument("--max-error", type=float, default=1e-4)
    common(sp, 1e-6)

    sp = sub.add_parser("orbit", help="CSV dump of an orbit")
    sp.add_argument("--matrix", type=Path, required=True)
    sp.add_argument("--samples", type=int, default=101)
    common(sp, 1e-6)
    return p


def _config(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        matrix=getattr(args, "matrix", None),
        wavelet=getattr(args, "wavelet", None),
        similarity=getattr(args, "similarity", None),
        kind=getattr(args, "kind", None),
        tol=args.tol,
        samples=getattr(args, "samples", 100),
        seed=getattr(args, "seed", 42),
        out=args.out,
        format=args.format,
        max_error=getattr(args, "max_error", 1e-4),
    )


def _matrix(path, where="--matrix"):
    return dio.matrix_from_json(dio.load_json(path), where)


def _emit(cfg: RunConfig, report: dict, table=None) -> None:
    text = dio.dumps(report)
    print(text)
    if cfg.out is None:
        return
    if cfg.format == "csv" and table is not None:
        dio.write_csv(*table, path=cfg.out)
    else:
        Path(cfg.out).write_text(text + "\n")


# --- commands ------------------------------------------------------------------


def run_check(cfg: RunConfig) -> int:
    v = decide(_matrix(cfg.matrix), cfg.tol)
    _emit(cfg, dio.verdict_to_json(v))
    return {Status.ADMISSIBLE: EXIT_OK, Status.NOT_ADMISSIBLE: EXIT_NOT_ADMISSIBLE,
            Status.UNKNOWN: EXIT_UNKNOWN}[v.status]


def _refuse(cfg, verdict, reason, code) -> int:
    _emit(cfg, {"refused": True, "reason": reason, "verdict": dio.verdict_to_json(verdict)})
    return code


def run_construct(cfg: RunConfig) -> int:
    X = _matrix(cfg.matrix)
    v = decide(X, cfg.tol)
    if v.status is Status.NOT_ADMISSIBLE:
        return _refuse(cfg, v, "the group is not admissible", EXIT_NOT_ADMISSIBLE)
    if v.status is Status.UNKNOWN:
        return _refuse(cfg, v, "no criterion decides this generator", EXIT_UNKNOWN)
    if cfg.similarity is not None:
        S = _matrix(cfg.similarity, "--similarity")
        if S.shape != X.shape:
            raise ParseError("--similarity", "dimension does not match --matrix")
        Y = np.linalg.solve(S, X @ S)
        off = Y - np.diag(np.diag(Y))
        if np.linalg.norm(off) > 1e-9 * max(1.0, np.linalg.norm(Y)):
            raise ParseError("--similarity", "S^{-1} X S is not diagonal")
        w = TransportedWavelet.from_similarity(IndicatorWavelet.from_diagonal(np.diag(np.diag(Y))), S)
    elif (v.criterion is Criterion.SYMMETRIC_PART_SIGN
          or criterion_symmetric_part(X, cfg.tol) is not None):
        # the 2x2 and trace criteria may answer first; the profile route only needs the sign test
        w = ProfileWavelet.from_generator(X)
    elif criterion_diagonal_trace(X, cfg.tol) is not None:
        w = IndicatorWavelet.from_diagonal(X)
    else:
        return _refuse(cfg, v, "admissible, but a construction needs a similarity S with "
                       "S^{-1} X S diagonal (pass --similarity); S is not synthesized",
                       EXIT_NO_CONSTRUCTION)
    _emit(cfg, {"verdict": dio.verdict_to_json(v), "wavelet": dio.wavelet_to_json(w)})
    return EXIT_OK


def _load_wavelet(cfg):
    obj = dio.load_json(cfg.wavelet)
    if isinstance(obj, dict) and "wavelet" in obj and "kind" not in obj:
        obj = obj["wavelet"]  # accept the construct report as is
    return dio.wavelet_from_json(obj)


def run_delta(cfg: RunConfig) -> int:
    w = _load_wavelet(cfg)
    X = None if cfg.matrix is None else _matrix(cfg.matrix)
    r = delta_sweep(w, X, cfg.samples, cfg.seed, cfg.tol)
    _emit(cfg, dio.delta_report_to_json(r), dio.delta_report_rows(r))
    return EXIT_OK if r.within_tolerance else EXIT_BREACH


def run_probe(cfg: RunConfig) -> int:
    if cfg.kind == "lie":
        X = np.array([[0.0, 1.0], [0.0, 0.0]])
        Y = X.T
        table = lie_convergence_probe(X, Y, DEFAULT_M)
        ratios = [a[1] / b[1] for a, b in zip(table, table[1:])]
        ok = all(1.6 <= q <= 2.4 for q in ratios)
        _emit(cfg, {"kind": "lie", "X": dio.matrix_to_json(X), "Y": dio.matrix_to_json(Y),
                    "table": [{"m": m, "error": e} for m, e in table], "ratios": ratios,
                    "target_norm": float(np.linalg.norm(mat_exp(X + Y), 2)), "rate_ok": ok},
              (["m", "error"], [[m, e] for m, e in table]))
        return EXIT_OK if ok else EXIT_BREACH
    D = None if cfg.matrix is None else _matrix(cfg.matrix)
    g = divergence_probe(cfg.kind, DEFAULT_RADII, D=D)
    ok = abs(g.fitted_exponent - g.expected_exponent) <= 0.05 and g.fit_quality >= 0.999
    report = dio.growth_table_to_json(g)
    report["within_tolerance"] = ok
    _emit(cfg, report, dio.growth_table_rows(g))
    return EXIT_OK if ok else EXIT_BREACH


def run_reconstruct(cfg: RunConfig) -> int:
    w = _load_wavelet(cfg)
    X = None if cfg.matrix is None else _matrix(cfg.matrix)
    grid = Grid()
    err = reconstruction_check(w, X, gaussian_bump(), grid, cfg.tol)
    ok = err <= cfg.max_error
    _emit(cfg, {"relative_error": err, "max_error": cfg.max_error, "within_tolerance": ok,
                "grid": {"lower": grid.lower, "upper": grid.upper, "points": grid.points},
                "f_hat": "gaussian bump, center (0.5, -0.3), width 0.6"})
    return EXIT_OK if ok else EXIT_BREACH


def run_orbit(cfg: RunConfig) -> int:
    X = _matrix(cfg.matrix)
    n = X.shape[0]
    v = np.zeros(n)
    v[0] = 1.0
    ts = np.linspace(-2.0, 2.0, cfg.samples)
    rows = []
    for t in ts:
        p = mat_exp(t * X) @ v
        rows.append([float(t), *map(float, p), float(np.linalg.norm(p))])
    header = ["t", *[f"v_{i}" for i in range(n)], "norm"]
    _emit(cfg, {"generator": dio.matrix_to_json(X), "v": v, "points": len(rows)}, (header, rows))
    return EXIT_OK


RUNNERS = {"check": run_check, "construct": run_construct, "delta": run_delta,
           "probe": run_probe, "reconstruct": run_reconstruct, "orbit": run_orbit}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return RUNNERS[cfg.command](cfg)
    except ParseError as exc:
        print(f"dilwave: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DilwaveError as exc:
        print(f"dilwave: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC if isinstance(exc, ArithmeticError) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

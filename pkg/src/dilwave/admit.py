"""Admissibility decisions for one-parameter groups ``G_X = {e^{tX}}``.

Criteria, in the order ``decide`` applies them:

1. ``TwoByTwoTrace``: for 2x2 generators, admissible iff ``tr X != 0``.
2. ``DiagonalizableTrace``: for real-diagonalizable ``X``, admissible iff
   ``tr X != 0``.
3. ``SymmetricPartSign``: if the eigenvalues of ``(X + X^T)/2`` are nonzero
   with one sign, admissible (sufficient only).
4. ``ComplexDiagSign``: if ``X`` is diagonalizable over C and the real parts
   of its eigenvalues are nonzero with one sign, admissible (sufficient only).

The two "iff" criteria come first so that non-admissibility is reachable.
When nothing applies the verdict is ``Unknown``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .config import DEFAULTS
from .errors import InvalidInputError
from .matkit import as_matrix, eigen_general, spectral_norm, split_sym_antisym, sym_eigen

__all__ = [
    "Criterion",
    "Status",
    "Verdict",
    "characterize_2x2",
    "criterion_complex_diag",
    "criterion_diagonal_trace",
    "criterion_diagonalizable_trace",
    "criterion_symmetric_part",
    "decide",
]


class Status(str, enum.Enum):
    ADMISSIBLE = "Admissible"
    NOT_ADMISSIBLE = "NotAdmissible"
    UNKNOWN = "Unknown"


class Criterion(str, enum.Enum):
    TWO_BY_TWO_TRACE = "TwoByTwoTrace"
    DIAGONALIZABLE_TRACE = "DiagonalizableTrace"
    SYMMETRIC_PART_SIGN = "SymmetricPartSign"
    COMPLEX_DIAG_SIGN = "ComplexDiagSign"
    DIAGONAL_TRACE = "DiagonalTrace"


# human-readable statement of the result each criterion rests on
REFERENCES = {
    Criterion.TWO_BY_TWO_TRACE: "2x2 generators: G_X admissible iff tr(X) != 0",
    Criterion.DIAGONALIZABLE_TRACE: "real-diagonalizable X: G_X admissible iff tr(X) != 0",
    Criterion.SYMMETRIC_PART_SIGN: "symmetric part (X+X^T)/2 with nonzero same-sign eigenvalues => admissible",
    Criterion.COMPLEX_DIAG_SIGN: "C-diagonalizable X with nonzero same-sign eigenvalue real parts => admissible",
    Criterion.DIAGONAL_TRACE: "diagonal D: G_D admissible iff tr(D) != 0",
    None: "no applicable criterion",
}


@dataclass(frozen=True)
class Verdict:
    status: Status
    criterion: Criterion | None
    certificate: dict[str, Any] = field(default_factory=dict)
    rationale: str = ""

    def __post_init__(self):
        if (self.status is Status.UNKNOWN) != (self.criterion is None):
            raise ValueError("a verdict is Unknown exactly when it has no criterion")
        if not self.rationale:
            object.__setattr__(self, "rationale", REFERENCES[self.criterion])

    @property
    def admissible(self) -> bool:
        return self.status is Status.ADMISSIBLE


def _clean(values) -> list:
    return [float(x) for x in np.asarray(values, dtype=float)]


def _complex_list(values) -> list:
    return [[float(z.real), float(z.imag)] for z in values]


def characterize_2x2(X, tol: float = DEFAULTS.decision) -> Verdict:
    """Complete answer for 2x2 generators: admissible iff the trace is nonzero."""
    X = as_matrix(X)
    if X.shape != (2, 2):
        raise InvalidInputError(f"characterize_2x2 needs a 2x2 matrix, got {X.shape}")
    tr = float(np.trace(X))
    threshold = tol * max(1.0, spectral_norm(X))
    status = Status.ADMISSIBLE if abs(tr) > threshold else Status.NOT_ADMISSIBLE
    return Verdict(status, Criterion.TWO_BY_TWO_TRACE, {"trace": tr, "threshold": threshold})


def criterion_symmetric_part(X, tol: float = DEFAULTS.decision) -> Verdict | None:
    X = as_matrix(X)
    norm = spectral_norm(X)
    M, _ = split_sym_antisym(X)
    lam = sym_eigen(M).real
    if norm == 0.0 or np.min(np.abs(lam)) <= tol * norm:
        return None
    if not (np.all(lam > 0) or np.all(lam < 0)):
        return None
    cert = {"sym_eigenvalues": _clean(lam), "threshold": tol * norm}
    return Verdict(Status.ADMISSIBLE, Criterion.SYMMETRIC_PART_SIGN, cert)


def _trace_verdict(X, tol, criterion, extra) -> Verdict | None:
    tr = float(np.trace(X))
    threshold = tol * max(1.0, spectral_norm(X))
    cert = {"trace": tr, "threshold": threshold, **extra}
    if abs(tr) > threshold:
        return Verdict(Status.ADMISSIBLE, criterion, cert)
    if abs(tr) <= threshold * DEFAULTS.zero_band:
        return Verdict(Status.NOT_ADMISSIBLE, criterion, cert)
    return None  # ambiguous band: do not call roundoff a zero trace


def criterion_diagonalizable_trace(X, tol: float = DEFAULTS.decision) -> Verdict | None:
    X = as_matrix(X)
    spec = eigen_general(X)
    if not spec.is_real_diagonalizable:
        return None
    return _trace_verdict(X, tol, Criterion.DIAGONALIZABLE_TRACE,
                          {"eigenvalues": _clean(spec.real)})


def criterion_diagonal_trace(X, tol: float = DEFAULTS.decision) -> Verdict | None:
    """Trace test restricted to exactly diagonal generators."""
    X = as_matrix(X)
    if np.any(X - np.diag(np.diag(X))):
        return None
    return _trace_verdict(X, tol, Criterion.DIAGONAL_TRACE, {"diagonal": _clean(np.diag(X))})


def criterion_complex_diag(X, tol: float = DEFAULTS.decision) -> Verdict | None:
    X = as_matrix(X)
    norm = spectral_norm(X)
    spec = eigen_general(X)
    if spec.gap <= DEFAULTS.eigen_gap * norm:
        return None  # repeated eigenvalues: diagonalizability not established
    re = spec.real
    if norm == 0.0 or np.min(np.abs(re)) <= tol * norm:
        return None
    if not (np.all(re > 0) or np.all(re < 0)):
        return None
    cert = {"eigenvalues": _complex_list(spec.eigenvalues), "real_parts": _clean(re),
            "gap": spec.gap, "threshold": tol * norm}
    return Verdict(Status.ADMISSIBLE, Criterion.COMPLEX_DIAG_SIGN, cert)


def decide(X, tol: float = DEFAULTS.decision) -> Verdict:
    """Run the criteria in fixed order; the first conclusive one wins."""
    X = as_matrix(X)
    if X.shape == (2, 2):
        return characterize_2x2(X, tol)
    for criterion in (criterion_diagonalizable_trace, criterion_symmetric_part,
                      criterion_complex_diag):
        verdict = criterion(X, tol)
        if verdict is not None:
            return verdict
    return Verdict(Status.UNKNOWN, None, {"trace": float(np.trace(X))})

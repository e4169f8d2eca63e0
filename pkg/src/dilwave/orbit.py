"""Orbits of a one-parameter group ``t -> e^{tX}`` acting on R^n minus the origin.

When the symmetric part of ``X`` has a spectrum of one sign (after flipping
``t -> -t`` if it is negative), ``t -> |e^{tX} v|`` is strictly increasing
from 0 to infinity for every nonzero ``v``. Each nonzero ``xi`` therefore has
a unique orbit time ``t`` and unit vector ``v`` with ``xi = e^{tX} v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULTS
from .errors import DomainError, HypothesisViolation, NumericError
from .matkit import _expm, as_matrix, spectral_norm, split_sym_antisym, sym_eigen

__all__ = [
    "GroupDescriptor",
    "NormBounds",
    "OrbitCoordinates",
    "group_from_generator",
    "norm_bounds_check",
    "orbit_decompose",
    "orbit_point",
    "orbit_time",
]


@dataclass(frozen=True, eq=False)
class GroupDescriptor:
    """A generator whose symmetric part has a same-sign spectrum.

    ``generator`` is the matrix as supplied. ``sign`` is -1 when its
    symmetric part is negative definite; every other field, and every
    orbit computation, refers to the time-reversed generator
    ``normalized = sign * generator`` so that ``0 < lambda_min``.
    """

    generator: np.ndarray
    sign: int
    sym_part: np.ndarray
    antisym_part: np.ndarray
    lambda_min: float
    lambda_max: float

    @property
    def normalized(self) -> np.ndarray:
        return self.sign * self.generator

    @property
    def n(self) -> int:
        return self.generator.shape[0]

    def transpose(self) -> "GroupDescriptor":
        # same symmetric part, negated antisymmetric part
        return GroupDescriptor(
            generator=self.generator.T.copy(),
            sign=self.sign,
            sym_part=self.sym_part,
            antisym_part=-self.antisym_part,
            lambda_min=self.lambda_min,
            lambda_max=self.lambda_max,
        )


class OrbitCoordinates(NamedTuple):
    t: float
    v: np.ndarray


class NormBounds(NamedTuple):
    lower: float
    value: float
    upper: float


def group_from_generator(X, *, tol=DEFAULTS) -> GroupDescriptor:
    X = as_matrix(X)
    norm = spectral_norm(X)
    M, A = split_sym_antisym(X)
    lam = sym_eigen(M, tol=tol).real
    lmax, lmin = float(lam[0]), float(lam[-1])
    floor = tol.zero_eigen * norm
    if norm == 0.0 or min(abs(lmin), abs(lmax)) <= floor or lmin * lmax <= 0:
        raise HypothesisViolation(
            "symmetric part must have nonzero eigenvalues of one sign; "
            f"got range [{lmin:.6g}, {lmax:.6g}]"
        )
    if lmax < 0:
        return GroupDescriptor(X, -1, -M, -A, -lmax, -lmin)
    return GroupDescriptor(X, 1, M, A, lmin, lmax)


def orbit_point(G: GroupDescriptor, t: float, v) -> np.ndarray:
    """``e^{t X} v`` for the normalized generator of ``G``."""
    v = np.asarray(v, dtype=float)
    return _expm(t * G.normalized) @ v


def _safe_newton(hd, a, b, t, xtol=1e-15, max_iter=200):
    # Newton on a decreasing h, falling back to bisection whenever a step
    # leaves the bracket [a, b] (h(a) > 0 > h(b)) or fails to halve it
    eps = np.finfo(float).eps
    width = b - a
    for _ in range(max_iter):
        ht, dt = hd(t)
        if abs(ht) <= 2 * eps:
            return t, ht  # residual at rounding level
        if ht > 0.0:
            a = t
        else:
            b = t
        if math.isnan(ht):
            raise NumericError("orbit solve produced NaN", t=t)
        step = ht / dt if math.isfinite(ht) and dt < 0.0 else math.inf
        new = t - step
        if not (a < new < b) or abs(step) > 0.5 * width:
            new = 0.5 * (a + b)
        width = abs(new - t)
        t = new
        if width <= xtol + 4 * eps * abs(t) or b - a <= xtol + 4 * eps * abs(t):
            return t, hd(t)[0]
    raise NumericError("orbit solve did not converge", bracket=(a, b), t=t)


def orbit_time(G: GroupDescriptor, xi, *, tol=DEFAULTS) -> float:
    """The unique ``t`` with ``|e^{-tX} xi| = 1``.

    ``h(t) = log|e^{-tX} xi|`` is strictly decreasing with slope between
    ``-lambda_max`` and ``-lambda_min``, so ``h`` has its root inside
    ``[log|xi| / lambda_max, log|xi| / lambda_min]`` (endpoints sorted).
    The root is found by Newton steps on ``h`` safeguarded by bisection
    inside that bracket; ``h'(t) = -<w, X w> / |w|^2`` with
    ``w = e^{-tX} xi`` costs nothing extra.
    """
    xi = np.asarray(xi, dtype=float)
    r = float(np.linalg.norm(xi))
    if not r > 0.0:
        raise DomainError("orbit time is undefined at the origin")
    logr = math.log(r)
    if logr == 0.0:
        return 0.0
    X = G.normalized

    def hd(t):
        with np.errstate(over="ignore", invalid="ignore"):
            w = _expm(-t * X) @ xi
            nw = float(np.linalg.norm(w))
        # far ends of a wide bracket can over/underflow; only the sign matters there
        if not math.isfinite(nw):
            return math.inf, math.nan
        if nw == 0.0:
            return -math.inf, math.nan
        u = w / nw
        return math.log(nw), -float(u @ (X @ u))

    a, b = sorted((logr / G.lambda_max, logr / G.lambda_min))
    # widen by a hair to absorb rounding in the analytic bounds
    pad = 1e-9 * (1.0 + abs(a) + abs(b))
    a -= pad
    b += pad
    ha, hb = hd(a)[0], hd(b)[0]
    if ha == 0.0:
        return a
    if hb == 0.0:
        return b
    if not (ha > 0.0 > hb):
        raise NumericError(
            "orbit bracket does not straddle the root",
            bracket=(a, b),
            values=(ha, hb),
        )
    # start from the chord through the bracket ends (midpoint if an end overflowed)
    if math.isfinite(ha) and math.isfinite(hb):
        t0 = a + (b - a) * ha / (ha - hb)
    else:
        t0 = 0.5 * (a + b)
    t, res = _safe_newton(hd, a, b, t0)
    if abs(res) > tol.orbit_residual:
        raise NumericError("orbit solve missed the residual target", t=t, residual=res)
    return float(t)


def orbit_decompose(G: GroupDescriptor, xi, *, tol=DEFAULTS) -> OrbitCoordinates:
    """Split ``xi = e^{tX} v`` with ``|v| = 1``.

    ``v`` solves ``e^{tX} v = xi`` against the same matrix ``orbit_point``
    applies, so the round trip error is a backward-stable residual rather
    than the product of two exponentials' errors (which grows like
    ``eps * e^{|t| (lambda_max - lambda_min)}``).
    """
    xi = np.asarray(xi, dtype=float)
    t = orbit_time(G, xi, tol=tol)
    v = np.linalg.solve(_expm(t * G.normalized), xi)
    return OrbitCoordinates(t, v)


def norm_bounds_check(G: GroupDescriptor, t: float, v) -> NormBounds:
    """Sandwich ``|e^{tX} v|`` between ``e^{t lambda} |v|`` for the extreme lambdas.

    For ``t >= 0`` the lower bound uses ``lambda_min`` and the upper uses
    ``lambda_max``; for ``t < 0`` the roles swap.
    """
    v = np.asarray(v, dtype=float)
    nv = float(np.linalg.norm(v))
    value = float(np.linalg.norm(orbit_point(G, t, v)))
    lo = math.exp(t * G.lambda_min) * nv
    hi = math.exp(t * G.lambda_max) * nv
    if t < 0:
        lo, hi = hi, lo
    return NormBounds(lo, value, hi)

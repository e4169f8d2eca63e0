"""Adaptive Gauss-Legendre quadrature and a few closed-form volumes."""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .errors import NumericError

__all__ = [
    "QuadResult",
    "ball_volume",
    "gauss_legendre",
    "integrate",
    "indicator_segments",
    "integrate_indicator",
    "sphere_area",
]

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(15)


class QuadResult(NamedTuple):
    value: float
    error: float
    evaluations: int


def gauss_legendre(f: Callable[[float], float], a: float, b: float,
                   vectorized: bool = False) -> float:
    """Single 15-point Gauss-Legendre panel on ``[a, b]``.

    With ``vectorized`` the integrand receives all 15 nodes as one array.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    if vectorized:
        return half * float(_WEIGHTS @ np.asarray(f(mid + half * _NODES), dtype=float))
    return half * sum(w * f(mid + half * x) for x, w in zip(_NODES, _WEIGHTS))


def integrate(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
              *, max_depth: int = 40, panels: int = 1, vectorized: bool = False) -> QuadResult:
    """Adaptive composite Gauss-Legendre on a finite interval.

    Each panel is compared against the sum of its two halves; a panel is
    accepted when the difference is below its share of ``tol`` (share
    proportional to panel length), otherwise both halves are refined.
    The reported error is the sum of accepted differences.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate needs a finite interval")
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    length = b - a
    count = 0

    def panel(lo, hi):
        nonlocal count
        count += 15
        return gauss_legendre(f, lo, hi, vectorized)

    edges = np.linspace(a, b, panels + 1)
    stack = [(lo, hi, panel(lo, hi), 0) for lo, hi in zip(edges[:-1], edges[1:])]
    total = 0.0
    err = 0.0
    while stack:
        lo, hi, whole, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = panel(lo, mid), panel(mid, hi)
        diff = abs(whole - (left + right))
        share = tol * (hi - lo) / length
        if diff <= share or depth >= max_depth:
            if diff > share and depth >= max_depth:
                raise NumericError("quadrature hit the refinement limit",
                                   interval=(lo, hi), difference=diff)
            total += left + right
            err += diff
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return QuadResult(sign * total, err, count)


def _bisect_edge(f, inside: float, outside: float, xtol: float) -> tuple[float, float, int]:
    # f(inside) != 0, f(outside) == 0; shrink the bracket around the jump
    count = 0
    while abs(outside - inside) > xtol:
        mid = 0.5 * (inside + outside)
        if mid == inside or mid == outside:
            break  # bracket is down to adjacent floats
        count += 1
        if f(mid) != 0.0:
            inside = mid
        else:
            outside = mid
    return 0.5 * (inside + outside), abs(outside - inside), count


def indicator_segments(f: Callable[[float], float], a: float, b: float, *,
                       grid: int = 512, xtol: float = 1e-13,
                       hint: tuple[float, float] | None = None):
    """Locate the pieces of ``[a, b]`` where a piecewise-constant ``f`` is nonzero.

    The interval is scanned on a uniform grid (plus the ``hint`` endpoints,
    when given, so a support interval known in closed form is hit exactly)
    and every change of value is bisected to ``xtol``. Returns
    ``(segments, edge_error, evaluations)`` with ``segments`` a list of
    ``(lo, hi, value)`` and ``edge_error`` the summed final bracket widths
    weighted by jump height.
    """
    pts = np.linspace(a, b, grid + 1)
    if hint is not None:
        lo, hi = hint
        pad = 1e-7 * (1.0 + abs(lo) + abs(hi))
        extra = [lo, hi, 0.5 * (lo + hi), lo - pad, hi + pad]
        pts = np.unique(np.concatenate([pts, [p for p in extra if a <= p <= b]]))
    vals = np.array([f(t) for t in pts])
    count = len(pts)
    edges = [a]
    levels = []
    err = 0.0
    for i in range(len(pts) - 1):
        if vals[i] == vals[i + 1]:
            continue
        if vals[i] != 0.0 and vals[i + 1] == 0.0:
            x, w, c = _bisect_edge(f, pts[i], pts[i + 1], xtol)
        elif vals[i] == 0.0 and vals[i + 1] != 0.0:
            x, w, c = _bisect_edge(f, pts[i + 1], pts[i], xtol)
        else:
            raise NumericError("indicator integrand takes two nonzero values",
                               values=(vals[i], vals[i + 1]))
        count += c
        levels.append(vals[i])
        edges.append(x)
        err += w * abs(vals[i] - vals[i + 1])
    levels.append(vals[-1])
    edges.append(b)
    segments = [(lo, hi, float(level)) for level, lo, hi in zip(levels, edges[:-1], edges[1:])
                if level != 0.0]
    return segments, float(err), count


def integrate_indicator(f: Callable[[float], float], a: float, b: float, *,
                        grid: int = 512, xtol: float = 1e-13,
                        hint: tuple[float, float] | None = None) -> QuadResult:
    """Integrate a piecewise-constant ``f`` over ``[a, b]`` exactly up to edge location."""
    segments, err, count = indicator_segments(f, a, b, grid=grid, xtol=xtol, hint=hint)
    total = sum(level * (hi - lo) for lo, hi, level in segments)
    return QuadResult(float(total), err, count)


def ball_volume(k: int, r: float = 1.0) -> float:
    """Volume of the radius-``r`` ball in R^k (k = 0 gives 1)."""
    return math.pi ** (k / 2) * r ** k / math.gamma(k / 2 + 1)


def sphere_area(k: int, r: float = 1.0) -> float:
    """Surface measure of the radius-``r`` sphere in R^k, i.e. d/dr of ``ball_volume``.

    For ``k = 1`` this is 2 (the two points of the "sphere" {-r, r}).
    """
    return k * ball_volume(k) * r ** (k - 1)

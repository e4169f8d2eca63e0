"""Frequency-side wavelets for one-parameter groups.

Three constructions, all evaluated pointwise as ``psi_hat(xi)``:

``ProfileWavelet``
    For ``X`` whose symmetric part has a one-signed spectrum:
    ``psi_hat(xi) = phi(t(xi))`` where ``t(xi)`` is the orbit time of ``xi``
    under the *transpose* group ``e^{t X^T}`` and ``phi`` is a unit-norm
    profile. The Calderon integral evaluates ``psi_hat`` along
    ``(e^{tX})^T xi = e^{t X^T} xi``, so building on the transpose makes the
    integrand exactly ``|phi(t + t(xi))|^2``.

``IndicatorWavelet``
    For diagonal ``D`` with nonzero trace: the indicator of the set swept by
    ``tau in [-(|u|+1), -|u|]`` under the chart ``(u, tau) -> e^{tau D}(u, 1)``,
    mirrored in the last coordinate. Every orbit crosses it for exactly one
    unit of time.

``TransportedWavelet``
    For ``X = S Y S^{-1}`` and a wavelet ``base`` for ``G_Y``:
    ``psi_hat(xi) = base(S^T xi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from .config import DEFAULTS
from .errors import HypothesisViolation, InvalidInputError
from .matkit import as_matrix, spectral_norm
from .orbit import GroupDescriptor, group_from_generator, orbit_time
from .quadrature import integrate

__all__ = [
    "IndicatorWavelet",
    "Profile",
    "ProfileWavelet",
    "Support",
    "TransportedWavelet",
    "default_profile",
    "evaluate",
    "indicator_wavelet_eval",
    "make_profile",
    "profile_wavelet_eval",
    "support_radius",
    "tabulated_profile",
    "transported_wavelet_eval",
]

NORM_TOL = 1e-10


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True, eq=False)
class Profile:
    """A continuous profile ``phi`` on ``[support_start, support_end]``, zero outside."""

    func: Callable[[float], float]
    support_start: float
    support_end: float
    l2_norm: float
    name: str = "custom"
    table: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __call__(self, t: float) -> float:
        if t < self.support_start or t > self.support_end:
            return 0.0
        return float(self.func(t))

    def scaled(self, factor: float) -> "Profile":
        """Multiply by ``factor`` without re-checking the norm (negative controls)."""
        f = self.func
        return replace(self, func=lambda t: factor * f(t), l2_norm=abs(factor) * self.l2_norm,
                       name=f"{self.name}*{factor:g}",
                       table=None if self.table is None else
                       (self.table[0], tuple(factor * v for v in self.table[1])))

    @property
    def N(self) -> float:
        return self.support_end


def _squared_norm(func, a, b) -> float:
    return integrate(lambda t: func(t) ** 2, a, b, tol=1e-14, panels=8).value


def make_profile(func, support_start: float, support_end: float, name: str = "custom") -> Profile:
    """Wrap ``func`` after checking unit L2 norm and continuity at finite support ends."""
    a, b = float(support_start), float(support_end)
    if not b > a or math.isinf(b):
        raise InvalidInputError("profile support must be a nonempty interval ending at a finite N")
    for end in (a, b):
        if math.isfinite(end) and abs(func(end)) > 1e-12:
            raise InvalidInputError(f"profile must vanish at the support edge t={end:g}")
    if math.isinf(a):
        # slow decay is the caller's business; integrate far enough to see the mass
        a_eff = b - 64.0
    else:
        a_eff = a
    sq = _squared_norm(func, a_eff, b)
    if abs(sq - 1.0) > NORM_TOL:
        raise InvalidInputError(f"profile must have unit L2 norm, got squared norm {sq:.15g}")
    return Profile(func, a, b, math.sqrt(sq), name)


_SQRT2 = math.sqrt(2.0)


def _raised_sine(t: float) -> float:
    return _SQRT2 * math.sin(math.pi * t)


def default_profile() -> Profile:
    """``phi(t) = sqrt(2) sin(pi t)`` on ``[0, 1]``: continuous, unit norm, N = 1."""
    return make_profile(_raised_sine, 0.0, 1.0, name="raised-sine")


def tabulated_profile(ts, values, *, normalize: bool = False) -> Profile:
    """Piecewise-linear profile through ``(ts[i], values[i])``.

    The squared norm of a linear interpolant is exact per segment
    (``h (a^2 + ab + b^2) / 3``), so the unit-norm check has no quadrature error.
    """
    ts = np.asarray(ts, dtype=float)
    vs = np.asarray(values, dtype=float)
    if ts.ndim != 1 or ts.shape != vs.shape or len(ts) < 3:
        raise InvalidInputError("tabulated profile needs matching 1-D t and value arrays (>= 3 points)")
    if np.any(np.diff(ts) <= 0) or not np.all(np.isfinite(ts)) or not np.all(np.isfinite(vs)):
        raise InvalidInputError("tabulated t must be finite and strictly increasing")
    if vs[0] != 0.0 or vs[-1] != 0.0:
        raise InvalidInputError("tabulated profile must vanish at both ends")
    h = np.diff(ts)
    sq = float(np.sum(h * (vs[:-1] ** 2 + vs[:-1] * vs[1:] + vs[1:] ** 2)) / 3.0)
    if normalize:
        vs = vs / math.sqrt(sq)
        sq = 1.0
    if abs(sq - 1.0) > NORM_TOL:
        raise InvalidInputError(f"profile must have unit L2 norm, got squared norm {sq:.15g}")
    ts_c, vs_c = ts.copy(), vs.copy()

    def func(t):
        return float(np.interp(t, ts_c, vs_c))

    return Profile(func, float(ts[0]), float(ts[-1]), math.sqrt(sq), "tabulated",
                   (tuple(ts_c.tolist()), tuple(vs_c.tolist())))


# ---------------------------------------------------------------------------
# wavelet specs


class Support(NamedTuple):
    radius: float
    bounded: bool


class LocalIntegrand(NamedTuple):
    """Orbit integrand in local time: ``func(s)`` is the value at ``t = origin + s``."""
    func: Callable[[float], float]
    origin: float
    window: tuple[float, float]


def _scale_factor(X: np.ndarray, G: np.ndarray, rtol: float = 1e-9) -> float | None:
    """``c`` with ``X = c G`` (to ``rtol``), or None if ``X`` is not a multiple of ``G``."""
    gg = float(np.vdot(G, G))
    if gg == 0.0:
        return None
    c = float(np.vdot(X, G)) / gg
    if c == 0.0 or np.linalg.norm(X - c * G) > rtol * max(np.linalg.norm(X), 1e-300):
        return None
    return c


@dataclass(frozen=True, eq=False)
class ProfileWavelet:
    group: GroupDescriptor
    profile: Profile
    kind: str = field(default="profile", init=False)
    is_indicator: bool = field(default=False, init=False)

    @classmethod
    def from_generator(cls, X, profile: Profile | None = None) -> "ProfileWavelet":
        return cls(group_from_generator(X), profile or default_profile())

    @property
    def generator(self) -> np.ndarray:
        return self.group.generator

    @cached_property
    def transpose_group(self) -> GroupDescriptor:
        return self.group.transpose()

    def support_radius(self, box_radius: float | None = None) -> Support:
        return Support(max(1.0, math.exp(self.profile.N * self.group.lambda_max)), True)

    def evaluate(self, xi) -> float:
        xi = np.asarray(xi, dtype=float)
        r = float(np.linalg.norm(xi))
        if r == 0.0 or r > self.support_radius().radius:
            return 0.0
        return self.profile(orbit_time(self.transpose_group, xi))

    def orbit_window(self, X, xi):
        """t-range where ``psi_hat((e^{tX})^T xi)`` can be nonzero.

        ``None`` if ``X`` is not a multiple of this wavelet's generator.
        """
        c = _scale_factor(np.asarray(X, dtype=float), self.group.normalized)
        if c is None:
            return None
        t0 = orbit_time(self.transpose_group, xi)
        lo = (self.profile.support_start - t0) / c
        hi = (self.profile.support_end - t0) / c
        return (min(lo, hi), max(lo, hi))


@dataclass(frozen=True, eq=False)
class IndicatorWavelet:
    """Indicator wavelet for a diagonal generator.

    ``permutation`` lists the original coordinate placed at each chart slot;
    its last entry is the distinguished axis (nonzero dilation). When
    ``tr(D) < 0`` the chart is built on ``-D`` (same group, reversed time)
    and ``reversed`` is True.
    """

    diagonal: np.ndarray
    permutation: np.ndarray
    reversed: bool
    kind: str = field(default="indicator", init=False)
    is_indicator: bool = field(default=True, init=False)

    @classmethod
    def from_diagonal(cls, D, *, tol: float = DEFAULTS.decision) -> "IndicatorWavelet":
        D = as_matrix(D)
        d = np.diag(D).copy()
        if np.any(D - np.diag(d)):
            raise InvalidInputError("indicator wavelet needs a diagonal matrix")
        tr = float(d.sum())
        if not abs(tr) > tol * max(1.0, float(np.max(np.abs(d)))):
            raise HypothesisViolation(f"indicator wavelet needs tr(D) != 0, got {tr:.6g}")
        n = len(d)
        nz = np.flatnonzero(d)
        last = int(nz[-1])
        perm = np.arange(n)
        perm[[last, n - 1]] = perm[[n - 1, last]]
        return cls(d, perm, tr < 0)

    @property
    def generator(self) -> np.ndarray:
        return np.diag(self.diagonal)

    @property
    def chart_diagonal(self) -> np.ndarray:
        d = self.diagonal[self.permutation]
        return -d if self.reversed else d

    @property
    def trace(self) -> float:
        """Trace of the chart diagonal (always positive)."""
        return float(self.chart_diagonal.sum())

    def _chart(self, xi):
        # (tau, |u|) chart coordinates of xi; xi_n must be nonzero
        eta = np.asarray(xi, dtype=float)[..., self.permutation]
        d = self.chart_diagonal
        tau = np.log(np.abs(eta[..., -1])) / d[-1]
        u = eta[..., :-1] * np.exp(-tau[..., None] * d[:-1])
        return tau, np.linalg.norm(u, axis=-1)

    def evaluate(self, xi) -> float:
        xi = np.asarray(xi, dtype=float)
        if xi[self.permutation[-1]] == 0.0:
            return 0.0
        tau, unorm = self._chart(xi)
        return 1.0 if -(unorm + 1.0) <= tau <= -unorm else 0.0

    def evaluate_many(self, xis) -> np.ndarray:
        xis = np.atleast_2d(np.asarray(xis, dtype=float))
        out = np.zeros(len(xis))
        ok = xis[:, self.permutation[-1]] != 0.0
        if np.any(ok):
            tau, unorm = self._chart(xis[ok])
            out[ok] = ((tau >= -(unorm + 1.0)) & (tau <= -unorm)).astype(float)
        return out

    def support_radius(self, box_radius: float | None = None) -> Support:
        return Support(math.inf if box_radius is None else float(box_radius), False)

    def orbit_window(self, X, xi):
        c = _scale_factor(np.asarray(X, dtype=float), self.generator)
        if c is None:
            return None
        xi = np.asarray(xi, dtype=float)
        if xi[self.permutation[-1]] == 0.0:
            return (0.0, 0.0)
        tau0, unorm = self._chart(xi)
        # along e^{tX} xi the chart time moves as tau0 + t*c*s, |u| is constant
        rate = c * (-1.0 if self.reversed else 1.0)
        lo = (-(unorm + 1.0) - tau0) / rate
        hi = (-unorm - tau0) / rate
        return (float(min(lo, hi)), float(max(lo, hi)))

    def orbit_integrand(self, X, xi):
        """``t -> |psi_hat((e^{tX})^T xi)|^2`` through the chart invariants.

        Along ``e^{tcD}`` the chart norm ``|u|`` is constant and ``tau``
        moves as ``tau0 + t c``. With ``sigma = tau + |u|`` the slab is
        ``sigma in [-1, 0]``; the integrand is returned in the local time
        ``s = t - origin`` where ``sigma(origin) = 0``. Far from the origin
        of frequency space ``|t|`` can reach 1e12, where float spacing in t
        alone exceeds the tolerance, so absolute times are never formed.
        ``None`` if ``X`` is not a multiple of the diagonal.
        """
        c = _scale_factor(np.asarray(X, dtype=float), self.generator)
        if c is None:
            return None
        eta = np.asarray(xi, dtype=float)[self.permutation]
        if eta[-1] == 0.0:
            return LocalIntegrand(lambda s: 0.0, 0.0, (0.0, 0.0))
        d = self.chart_diagonal
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(eta))
        tau0 = logs[-1] / d[-1]
        unorm = float(np.linalg.norm(np.exp(logs[:-1] - tau0 * d[:-1])))
        rate = -c if self.reversed else c
        origin = -(tau0 + unorm) / rate

        def f(s):
            sigma = rate * s
            return 1.0 if -1.0 <= sigma <= 0.0 else 0.0
        lo, hi = sorted((-1.0 / rate, 0.0))
        return LocalIntegrand(f, origin, (lo, hi))


@dataclass(frozen=True, eq=False)
class TransportedWavelet:
    base: "ProfileWavelet | IndicatorWavelet | TransportedWavelet"
    S: np.ndarray
    S_inv: np.ndarray
    kind: str = field(default="transported", init=False)

    @classmethod
    def from_similarity(cls, base, S, *, max_cond: float = 1e12) -> "TransportedWavelet":
        S = as_matrix(S)
        if S.shape[0] != base.generator.shape[0]:
            raise InvalidInputError("similarity has the wrong dimension")
        try:
            S_inv = np.linalg.inv(S)
        except np.linalg.LinAlgError:
            raise InvalidInputError("similarity matrix is singular") from None
        cond = spectral_norm(S) * spectral_norm(S_inv)
        if not np.isfinite(cond) or cond > max_cond:
            raise InvalidInputError(f"similarity matrix is numerically singular (cond {cond:.3g})")
        return cls(base, S, S_inv)

    @property
    def is_indicator(self) -> bool:
        return self.base.is_indicator

    @property
    def generator(self) -> np.ndarray:
        """The target generator ``S Y S^{-1}``."""
        return self.S @ self.base.generator @ self.S_inv

    def evaluate(self, xi) -> float:
        return self.base.evaluate(self.S.T @ np.asarray(xi, dtype=float))

    def evaluate_many(self, xis) -> np.ndarray:
        xis = np.atleast_2d(np.asarray(xis, dtype=float))
        moved = xis @ self.S
        if hasattr(self.base, "evaluate_many"):
            return self.base.evaluate_many(moved)
        return np.array([self.base.evaluate(x) for x in moved])

    def support_radius(self, box_radius: float | None = None) -> Support:
        inner = self.base.support_radius(None if box_radius is None
                                         else box_radius * spectral_norm(self.S))
        if not inner.bounded:
            return Support(math.inf if box_radius is None else float(box_radius), False)
        return Support(inner.radius * spectral_norm(self.S_inv), True)

    def orbit_window(self, X, xi):
        X = np.asarray(X, dtype=float)
        return self.base.orbit_window(self.S_inv @ X @ self.S, self.S.T @ np.asarray(xi, dtype=float))

    def orbit_integrand(self, X, xi):
        inner = getattr(self.base, "orbit_integrand", None)
        if inner is None:
            return None
        X = np.asarray(X, dtype=float)
        return inner(self.S_inv @ X @ self.S, self.S.T @ np.asarray(xi, dtype=float))


def profile_wavelet_eval(spec: ProfileWavelet, xi) -> float:
    return spec.evaluate(xi)


def indicator_wavelet_eval(spec: IndicatorWavelet, xi) -> float:
    return spec.evaluate(xi)


def transported_wavelet_eval(spec: TransportedWavelet, xi) -> float:
    return spec.evaluate(xi)


def evaluate(spec, xi) -> float:
    return spec.evaluate(xi)


def support_radius(spec, box_radius: float | None = None) -> Support:
    return spec.support_radius(box_radius)

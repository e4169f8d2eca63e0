"""Numerical checks of the Calderon condition and the mass computations around it.

``Delta(xi) = int_R |psi_hat((e^{tX})^T xi)|^2 dt`` with Lebesgue ``dt`` as the
Haar measure (the group element ``e^{tX}``, ``t in [0, 1]``, gets mass 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError, InvalidInputError, MethodError, TruncationError
from .matkit import _expm, as_matrix, lie_product_approx, mat_exp, spectral_norm
from .quadrature import (
    ball_volume,
    indicator_segments,
    integrate,
    integrate_indicator,
    sphere_area,
)
from .wavelet import IndicatorWavelet

__all__ = [
    "DeltaReport",
    "DeltaResult",
    "DeltaSample",
    "Grid",
    "GrowthTable",
    "MassEstimate",
    "corrected_mass_bound",
    "delta_integral",
    "delta_sweep",
    "divergence_probe",
    "lie_convergence_probe",
    "l2_mass",
    "stated_mass_bound",
    "reconstruction_check",
    "sample_frequencies",
]

RADIUS_RANGE = (1e-3, 1e3)


class DeltaResult(NamedTuple):
    value: float
    error: float
    t_range: tuple[float, float]
    rule: str
    evaluations: int


class DeltaSample(NamedTuple):
    xi: np.ndarray
    delta: float
    error: float


@dataclass(frozen=True, eq=False)
class DeltaReport:
    samples: list[DeltaSample]
    max_abs_deviation: float
    quadrature: dict
    seed: int
    tol: float

    @property
    def worst(self) -> int:
        return int(np.argmax([abs(s.delta - 1.0) for s in self.samples]))

    @property
    def within_tolerance(self) -> bool:
        return self.max_abs_deviation <= self.tol and all(s.error <= self.tol for s in self.samples)


@dataclass(frozen=True, eq=False)
class GrowthTable:
    kind: str
    radii: np.ndarray
    masses: np.ndarray
    fitted_exponent: float
    fit_quality: float
    expected_exponent: float
    orbit_deltas: np.ndarray = field(default_factory=lambda: np.zeros(0))


class MassEstimate(NamedTuple):
    value: float
    stderr: float
    method: str


@dataclass(frozen=True)
class Grid:
    """Tensor grid ``points`` per axis on the box ``[lower, upper]^n``."""

    lower: float = -2.5
    upper: float = 2.5
    points: int = 12

    def nodes(self, n: int) -> np.ndarray:
        axis = np.linspace(self.lower, self.upper, self.points)
        mesh = np.meshgrid(*([axis] * n), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


# --- Delta ---------------------------------------------------------------------


def _integrand(w, X, xi):
    def f(t):
        return w.evaluate(_expm(t * X).T @ xi) ** 2
    return f


def _truncated(f, tol, indicator, start=8.0, limit=1024.0):
    # grow a symmetric range until two successive doublings agree to tol/10;
    # each doubling only integrates the two new outer pieces
    def piece(lo, hi):
        if indicator:
            return integrate_indicator(f, lo, hi, grid=max(128, int(16 * (hi - lo))))
        return integrate(f, lo, hi, tol / 20, panels=max(1, int(hi - lo)))

    first = piece(-start, start)
    value, error, count = first.value, first.error, first.evaluations
    history = [value]
    T = start
    while 2 * T <= limit:
        left, right = piece(-2 * T, -T), piece(T, 2 * T)
        value += left.value + right.value
        error += left.error + right.error
        count += left.evaluations + right.evaluations
        history.append(value)
        T *= 2
        if len(history) >= 3:
            a, b, c = history[-3:]
            if abs(b - a) < tol / 10 and abs(c - b) < tol / 10:
                return DeltaResult(value, error + abs(c - b), (-T, T), "truncated", count)
    raise TruncationError(f"Delta did not settle by |t| <= {limit:g}")


def delta_integral(w, X=None, xi=None, tol: float = 1e-6) -> DeltaResult:
    """``Delta(xi)`` for wavelet ``w`` along the group generated by ``X``.

    ``X`` defaults to the wavelet's own generator. When the wavelet can
    report the exact t-window of its integrand the quadrature runs on that
    window only; otherwise the range is grown by doubling.
    """
    X = as_matrix(w.generator if X is None else X)
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (X.shape[0],):
        raise InvalidInputError(f"xi must have length {X.shape[0]}")
    if not np.linalg.norm(xi) > 0.0:
        raise DomainError("Delta is undefined at the origin")
    local = w.orbit_integrand(X, xi) if hasattr(w, "orbit_integrand") else None
    if local is not None:
        f, origin, window = local
    else:
        f, origin, window = _integrand(w, X, xi), 0.0, w.orbit_window(X, xi)
    if window is None or not all(map(math.isfinite, window)):
        return _truncated(f, tol, w.is_indicator)
    lo, hi = window
    if hi <= lo:
        return DeltaResult(0.0, 0.0, (origin + lo, origin + hi), "empty", 0)
    if w.is_indicator:
        pad = 0.25 * (hi - lo) + 1e-3
        res = integrate_indicator(f, lo - pad, hi + pad, grid=64, hint=(lo, hi))
        return DeltaResult(res.value, res.error, (origin + lo - pad, origin + hi + pad),
                           "indicator-edges", res.evaluations)
    res = integrate(f, lo, hi, tol / 10)
    return DeltaResult(res.value, res.error, (origin + lo, origin + hi), "gauss-legendre-15",
                       res.evaluations)


def _sample_stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def sample_frequencies(n: int, count: int, seed: int) -> np.ndarray:
    """Stratified log-uniform radii in ``[1e-3, 1e3]`` with uniform directions.

    Sample ``i`` draws from its own counter-based stream, so any subset can
    be regenerated independently. With ``count >= 2`` the first and last
    strata sit exactly on the two radius extremes.
    """
    if count < 1:
        raise InvalidInputError("count must be at least 1")
    lo, hi = (math.log10(r) for r in RADIUS_RANGE)
    out = np.empty((count, n))
    for i in range(count):
        rng = _sample_stream(seed, i)
        d = rng.standard_normal(n)
        while not np.linalg.norm(d) > 0.0:
            d = rng.standard_normal(n)
        jitter = rng.random()
        if count >= 2 and i == 0:
            e = lo
        elif count >= 2 and i == count - 1:
            e = hi
        else:
            e = lo + (hi - lo) * (i + jitter) / count
        out[i] = 10.0 ** e * d / np.linalg.norm(d)
    return out


def delta_sweep(w, X=None, count: int = 100, seed: int = 42, tol: float = 1e-6,
                map_fn: Callable = map) -> DeltaReport:
    """Delta at ``count`` seeded frequencies; ``map_fn`` may be a parallel map."""
    X = as_matrix(w.generator if X is None else X)
    xis = sample_frequencies(X.shape[0], count, seed)
    results = list(map_fn(lambda xi: delta_integral(w, X, xi, tol), list(xis)))
    samples = [DeltaSample(xi, float(r.value), float(r.error)) for xi, r in zip(xis, results)]
    rules = sorted({r.rule for r in results})
    lo = min(r.t_range[0] for r in results)
    hi = max(r.t_range[1] for r in results)
    quad = {"rule": "+".join(rules), "panels": int(sum(r.evaluations for r in results) // 15),
            "t_range": [lo, hi]}
    dev = max(abs(s.delta - 1.0) for s in samples)
    return DeltaReport(samples, float(dev), quad, int(seed), float(tol))


# --- L2 mass of the indicator wavelet -----------------------------------------


def _indicator_chart(w):
    if isinstance(w, IndicatorWavelet):
        return w.chart_diagonal
    raise MethodError(f"Fubini mass needs the indicator chart; use MonteCarlo for {w.kind}")


def _slab_integral(tr, a, b):
    # int_a^b e^{tau tr} d tau
    return (math.exp(b * tr) - math.exp(a * tr)) / tr


def _clipped_slab(d, u, R, tr):
    """``int e^{tau tr}`` over ``tau in [-(|u|+1), -|u|]`` inside the ball of radius R."""
    r = float(np.linalg.norm(u))
    a, b = -(r + 1.0), -r
    coef = np.append(np.asarray(u, dtype=float) ** 2, 1.0)

    def F(tau):
        return float(np.sum(coef * np.exp(2.0 * tau * d))) - R * R

    Fa, Fb = F(a), F(b)
    if Fa <= 0 and Fb <= 0:
        return _slab_integral(tr, a, b)  # convex in tau: whole slab inside
    opt = minimize_scalar(F, bounds=(a, b), method="bounded", options={"xatol": 1e-14})
    m, Fm = float(opt.x), float(opt.fun)
    if Fa <= Fm:
        m, Fm = a, Fa
    if Fb <= Fm:
        m, Fm = b, Fb
    if Fm > 0:
        return 0.0
    lo = a if Fa <= 0 else brentq(F, a, m, xtol=1e-15)
    hi = b if Fb <= 0 else brentq(F, m, b, xtol=1e-15)
    return _slab_integral(tr, lo, hi)


def _u_cutoff(tr, k):
    # tail of int r^{k-1} e^{-r tr} dr beyond the cutoff is below ~1e-19
    return (45.0 + 2.0 * k * math.log1p(45.0 / tr)) / tr


def _fubini_mass(w, R, tol):
    d = _indicator_chart(w)
    n = len(d)
    tr, dn = float(d.sum()), abs(float(d[-1]))
    k = n - 1
    if k == 0:
        if math.isinf(R):
            return 2.0 * dn * _slab_integral(tr, -1.0, 0.0)
        return 2.0 * dn * _clipped_slab(d, np.zeros(0), R, tr)
    U = _u_cutoff(tr, k)
    if math.isinf(R):
        # |u| only enters through r = |u|: integrate over spheres in R^{n-1}
        def g(r):
            return sphere_area(k, r) * (math.exp(-r * tr) - math.exp(-(r + 1.0) * tr)) / tr
        res = integrate(g, 0.0, U, tol, panels=16)
        return 2.0 * dn * res.value
    if k == 1:
        res = integrate(lambda r: _clipped_slab(d, [r], R, tr), 0.0, U, tol, panels=16)
        return 4.0 * dn * res.value
    if k == 2:
        if d[0] == d[1]:
            res = integrate(lambda r: 2 * math.pi * r * _clipped_slab(d, [r, 0.0], R, tr),
                            0.0, U, tol, panels=16)
            return 2.0 * dn * res.value

        def ring(r):
            return r * integrate(
                lambda th: _clipped_slab(d, [r * math.cos(th), r * math.sin(th)], R, tr),
                0.0, 2 * math.pi, tol).value
        res = integrate(ring, 0.0, U, tol, panels=16)
        return 2.0 * dn * res.value
    raise MethodError("finite-radius Fubini mass is implemented for n <= 3; use MonteCarlo")


def _monte_carlo_mass(w, R, samples, seed):
    if not math.isfinite(R):
        raise MethodError("MonteCarlo mass needs a finite radius")
    n = w.generator.shape[0]
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 0])))
    d = rng.standard_normal((samples, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    pts = d * (R * rng.random(samples) ** (1.0 / n))[:, None]
    if hasattr(w, "evaluate_many"):
        vals = w.evaluate_many(pts)
    else:
        vals = np.array([w.evaluate(p) for p in pts])
    vals = vals ** 2
    vol = ball_volume(n, R)
    return MassEstimate(float(vol * vals.mean()),
                        float(vol * vals.std(ddof=1) / math.sqrt(samples)), "montecarlo")


def l2_mass(w, R: float = math.inf, method: str = "fubini", samples: int = 100_000,
            seed: int = 42, tol: float = 1e-12) -> MassEstimate:
    """Squared L2 mass of ``psi_hat`` over the ball of radius ``R``."""
    if not R > 0:
        raise InvalidInputError("R must be positive")
    method = method.lower()
    if method == "fubini":
        return MassEstimate(float(_fubini_mass(w, float(R), tol)), 0.0, "fubini")
    if method == "montecarlo":
        if samples < 2:
            raise InvalidInputError("MonteCarlo needs at least 2 samples")
        return _monte_carlo_mass(w, float(R), int(samples), seed)
    raise MethodError(f"unknown mass method {method!r}")


def stated_mass_bound(w: IndicatorWavelet) -> float:
    """``2|d_n| V_{n-1}(1) Gamma(n) / tr^{n+1}``, the bound as originally stated."""
    d = _indicator_chart(w)
    n = len(d)
    return 2 * abs(d[-1]) * ball_volume(n - 1) * math.gamma(n) / float(d.sum()) ** (n + 1)


def corrected_mass_bound(w: IndicatorWavelet) -> float:
    """``2|d_n| (n-1) V_{n-1}(1) Gamma(n-1) / tr^n``, valid for every n >= 1.

    The radial integral of ``|S^{n-2}| r^{n-2} e^{-r tr}`` gives
    ``(n-1) V_{n-1}(1) Gamma(n-1) / tr^{n-1}``; the slab contributes at most
    ``1/tr``. For ``n = 1`` the bound is ``2|d_1|/tr``.
    """
    d = _indicator_chart(w)
    n = len(d)
    tr = float(d.sum())
    if n == 1:
        return 2 * abs(d[-1]) / tr
    return 2 * abs(d[-1]) * (n - 1) * ball_volume(n - 1) * math.gamma(n - 1) / tr ** n


# --- divergence probes --------------------------------------------------------


class _Candidate(NamedTuple):
    """Orbit-normalized candidate with chart ``g(u, t) = E(t) base(u)``.

    ``E(t) = e^{tY}`` with ``Y = X^T`` is the transpose-group element, so each
    t-line of the chart is one orbit and Delta along it is the t-integral of
    ``|psi_hat(g(u, t))|^2``. ``exp_t`` returns ``E`` for an array of times in
    closed form. ``mirror`` counts the copies of the chart image needed to
    cover the support (2 when the chart only reaches one half-space).
    """

    name: str
    generator: np.ndarray
    exp_t: Callable[[np.ndarray], np.ndarray]
    base: Callable[[np.ndarray], np.ndarray]
    base_du: np.ndarray
    psi_hat: Callable[[np.ndarray], float]
    t_range: tuple[float, float]
    indicator: bool
    polar: bool
    mirror: float
    expected: float

    @property
    def cross_dim(self) -> int:
        return self.base_du.shape[1]

    def chart(self, u, t: float) -> np.ndarray:
        return self.exp_t(np.array([t]))[0] @ self.base(u)

    def jacobian(self, u, ts) -> np.ndarray:
        """Stack of Jacobian matrices ``[dg/du_1 ... dg/du_k, dg/dt]`` at times ``ts``."""
        E = self.exp_t(np.atleast_1d(ts))
        b = self.base(u)
        J = np.empty(E.shape)
        J[:, :, :-1] = E @ self.base_du
        J[:, :, -1] = (E @ b) @ self.generator  # Y E b with Y = X^T, row form
        return J


def _trace_zero_candidate(D) -> _Candidate:
    D = as_matrix(D)
    d = np.diag(D).copy()
    if np.any(D - np.diag(d)):
        raise InvalidInputError("TraceZeroDiagonal needs a diagonal matrix")
    if abs(d.sum()) > 1e-12 * max(1.0, float(np.max(np.abs(d)))):
        raise InvalidInputError(f"TraceZeroDiagonal needs tr(D) = 0, got {d.sum():.3g}")
    n = len(d)
    if n not in (2, 3):
        raise InvalidInputError("TraceZeroDiagonal probe supports n = 2 or 3")
    nz = np.flatnonzero(d)
    if len(nz) == 0:
        raise InvalidInputError("TraceZeroDiagonal needs a nonzero diagonal entry")
    perm = np.arange(n)
    perm[[nz[-1], n - 1]] = perm[[n - 1, nz[-1]]]
    axis, dn = perm[-1], d[perm[-1]]

    def psi_hat(xi):
        # unit slab tau in [-1, 0] along the distinguished axis, both signs
        x = xi[axis]
        if x == 0.0:
            return 0.0
        tau = math.log(abs(x)) / dn
        return 1.0 if -1.0 <= tau <= 0.0 else 0.0

    def exp_t(ts):
        E = np.zeros((len(ts), n, n))
        E[:, np.arange(n), np.arange(n)] = np.exp(np.multiply.outer(ts, d))
        return E

    def base(u):
        b = np.zeros(n)
        b[perm[:-1]] = u
        b[axis] = 1.0
        return b

    return _Candidate("TraceZeroDiagonal", D, exp_t, base, np.eye(n)[:, perm[:-1]], psi_hat,
                      (-4.0, 3.0), True, False, 2.0, float(n - 1))


_E1 = np.array([[1.0], [0.0]])


def _rotation_candidate() -> _Candidate:
    X = np.array([[0.0, 1.0], [-1.0, 0.0]])
    c = 1.0 / math.sqrt(2.0 * math.pi)

    def psi_hat(xi):
        return c if np.any(xi != 0.0) else 0.0

    def exp_t(ts):
        # e^{t X^T} with X^T = [[0,-1],[1,0]]: rotation by +t
        cs, sn = np.cos(ts), np.sin(ts)
        return np.stack([np.stack([cs, -sn], -1), np.stack([sn, cs], -1)], -2)

    return _Candidate("Rotation2D", X, exp_t, lambda u: np.array([u[0], 0.0]), _E1, psi_hat,
                      (0.0, 2.0 * math.pi), False, True, 1.0, 2.0)


def _shear_candidate() -> _Candidate:
    X = np.array([[0.0, 1.0], [0.0, 0.0]])

    def psi_hat(xi):
        if xi[0] == 0.0:
            return 0.0
        s = xi[1] / xi[0]
        return 1.0 if 0.0 <= s <= 1.0 else 0.0

    def exp_t(ts):
        # e^{t X^T} = [[1,0],[t,1]]
        E = np.zeros((len(ts), 2, 2))
        E[:, 0, 0] = E[:, 1, 1] = 1.0
        E[:, 1, 0] = ts
        return E

    return _Candidate("NilpotentShear2D", X, exp_t, lambda u: np.array([u[0], 0.0]), _E1,
                      psi_hat, (-3.0, 4.0), True, False, 1.0, 1.0)


def _slice_mass(c: _Candidate, u) -> float:
    """``int |psi_hat(g(u,t))|^2 |det J_g(u,t)| dt`` for one cross-section point."""
    def weight(ts):
        return np.abs(np.linalg.det(c.jacobian(u, ts)))

    if c.indicator:
        segs, _, _ = indicator_segments(lambda t: c.psi_hat(c.chart(u, t)), *c.t_range,
                                        grid=16, xtol=1e-12)
        return sum(level ** 2 * integrate(weight, lo, hi, 1e-12, vectorized=True).value
                   for lo, hi, level in segs)

    def f(ts):
        psi = np.array([c.psi_hat(c.chart(u, t)) for t in ts])
        return psi ** 2 * weight(ts)
    return integrate(f, *c.t_range, 1e-12, vectorized=True).value


def _probe_mass(c: _Candidate, R: float) -> float:
    if c.polar:
        # u is the radius rho > 0 and the group time is the angle
        total = integrate(lambda r: _slice_mass(c, [r]), 0.0, R, 1e-9).value
    elif c.cross_dim == 1:
        total = integrate(lambda r: _slice_mass(c, [r]), -R, R, 1e-9, panels=2).value
    else:
        total = integrate(lambda r: r * integrate(
            lambda th: _slice_mass(c, [r * math.cos(th), r * math.sin(th)]),
            0.0, 2 * math.pi, 1e-9).value, 0.0, R, 1e-9).value
    return c.mirror * total


def _candidate(kind: str, D=None) -> _Candidate:
    key = kind.lower().replace("_", "").replace("-", "")
    if key in ("tracezerodiagonal", "tracezero"):
        return _trace_zero_candidate(np.diag([1.0, -1.0]) if D is None else D)
    if key in ("rotation2d", "rotation"):
        return _rotation_candidate()
    if key in ("nilpotentshear2d", "nilpotentshear", "shear"):
        return _shear_candidate()
    raise InvalidInputError(f"unknown divergence kind {kind!r}")


def divergence_probe(kind: str, radii: Sequence[float] = (1, 2, 4, 8, 16, 32, 64),
                     D=None) -> GrowthTable:
    """Truncated L2 mass of an orbit-normalized candidate versus R.

    Each candidate has Delta = 1 on every orbit; the table shows the mass
    it is then forced to carry inside the radius-R cross-section.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or len(radii) < 2 or np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise InvalidInputError("radii must be positive and strictly increasing, at least two")
    c = _candidate(kind, D)
    masses = np.array([_probe_mass(c, R) for R in radii])
    logr, logm = np.log(radii), np.log(masses)
    slope, intercept = np.polyfit(logr, logm, 1)
    resid = logm - (slope * logr + intercept)
    ss_tot = float(np.sum((logm - logm.mean()) ** 2))
    quality = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 0.0
    return GrowthTable(c.name, radii, masses, float(slope), quality, c.expected,
                       _orbit_deltas(c))


def _orbit_deltas(c: _Candidate) -> np.ndarray:
    # Delta of the candidate on a few orbits, integrated along (e^{tX})^T
    n = c.generator.shape[0]
    if c.name == "Rotation2D":
        points, rng = [np.array([0.3, 0.0]), np.array([-2.0, 5.0])], (0.0, 2 * math.pi)
    elif c.name == "NilpotentShear2D":
        points, rng = [np.array([1.0, 0.2]), np.array([-3.0, 7.0])], (-40.0, 40.0)
    else:
        points, rng = [np.full(n, 0.7), -np.linspace(1.0, 2.0, n)], (-12.0, 12.0)
    out = []
    for xi in points:
        def f(t, xi=xi):
            return c.psi_hat(_expm(t * c.generator).T @ xi) ** 2
        if c.indicator:
            out.append(integrate_indicator(f, *rng, grid=4096).value)
        else:
            out.append(integrate(f, *rng, 1e-12).value)
    return np.array(out)


# --- Lie product and reconstruction --------------------------------------------


def lie_convergence_probe(X, Y, m_values: Sequence[int]) -> list[tuple[int, float]]:
    """``(m, || (e^{X/m} e^{Y/m})^m - e^{X+Y} ||_2)`` for each m."""
    X, Y = as_matrix(X), as_matrix(Y)
    m_values = [int(m) for m in m_values]
    if any(m < 1 for m in m_values) or any(b <= a for a, b in zip(m_values, m_values[1:])):
        raise InvalidInputError("m_values must be positive and increasing")
    target = mat_exp(X + Y)
    return [(m, spectral_norm(lie_product_approx(X, Y, m) - target)) for m in m_values]


def reconstruction_check(w, X=None, f_hat: Callable | None = None, grid: Grid = Grid(),
                         tol: float = 1e-6) -> float:
    """Relative L2 distance between ``f_hat`` and ``f_hat * Delta`` on ``grid``.

    Grid nodes at the origin are skipped (a null set for Delta).
    """
    X = as_matrix(w.generator if X is None else X)
    if f_hat is None:
        raise InvalidInputError("reconstruction_check needs f_hat")
    num = den = 0.0
    for xi in grid.nodes(X.shape[0]):
        if not np.any(xi):
            continue
        f = float(f_hat(xi))
        if f == 0.0:
            continue
        delta = delta_integral(w, X, xi, tol).value
        num += (f - f * delta) ** 2
        den += f * f
    return math.sqrt(num / den) if den > 0 else 0.0


def gaussian_bump(center=(0.5, -0.3), width: float = 0.6) -> Callable:
    c = np.asarray(center, dtype=float)

    def f(xi):
        return math.exp(-float(np.sum((np.asarray(xi) - c) ** 2)) / (2 * width ** 2))
    return f

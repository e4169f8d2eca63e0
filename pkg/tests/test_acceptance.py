"""Acceptance criteria, one test (or one group of parts) per criterion.

Each part records ``(name, passed, detail)`` into ``conftest.ACCEPTANCE``;
the terminal summary prints one PASS/FAIL line per criterion. Thresholds
and time limits are the criteria's own; nothing is relaxed here.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate as sci

from conftest import ACCEPTANCE
from dilwave.admit import Status, decide
from dilwave.matkit import lie_product_approx, mat_exp, mat_log, spectral_norm
from dilwave.orbit import group_from_generator, norm_bounds_check, orbit_decompose, orbit_point
from dilwave.verify import (
    Grid,
    delta_sweep,
    divergence_probe,
    gaussian_bump,
    l2_mass,
    lie_convergence_probe,
    stated_mass_bound,
    reconstruction_check,
)
from dilwave.wavelet import IndicatorWavelet, ProfileWavelet, TransportedWavelet
from oracles import expm_series_longdouble, log_uniform_vector, random_generator

SHEAR = np.array([[1.0, 1.0], [0.0, 1.0]])
S_FIXED = np.array([[1.3, 0.6], [-0.4, 0.9]])  # cond ~ 2.3


def record(k, part, passed, detail):
    ACCEPTANCE.setdefault(k, []).append((part, bool(passed), detail))
    print(f"criterion {k} [{part}]: {'PASS' if passed else 'FAIL'} ({detail})")
    return bool(passed)


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# --- 1. 2x2 completeness ------------------------------------------------------------


def test_criterion_1_two_by_two_completeness():
    rng = np.random.default_rng(1)
    mats = []
    while len(mats) < 1000:
        X = rng.normal(size=(2, 2)) * 10 ** rng.uniform(-3, 3)
        if abs(np.trace(X)) > 1e-6 * spectral_norm(X):
            mats.append(X)
    verdicts, elapsed = timed(lambda: [decide(X) for X in mats])
    agree = sum((v.status is Status.ADMISSIBLE) == (np.trace(X) != 0) for X, v in zip(mats, verdicts))
    unknown = sum(v.status is Status.UNKNOWN for v in verdicts)
    ok = [record(1, "agreement", agree == 1000, f"{agree}/1000"),
          record(1, "unknowns", unknown == 0, f"{unknown}"),
          record(1, "time", elapsed < 1.0, f"{elapsed:.3f} s < 1 s")]
    assert all(ok)


# --- 2. Calderon condition ----------------------------------------------------------


def test_criterion_2_calderon_condition():
    specs = {
        "profile [[1,1],[0,1]]": (ProfileWavelet.from_generator(SHEAR), SHEAR),
        "indicator diag(1,2)": (IndicatorWavelet.from_diagonal(np.diag([1.0, 2.0])), None),
        "transported S diag(1,1) S^-1": (
            TransportedWavelet.from_similarity(IndicatorWavelet.from_diagonal(np.eye(2)), S_FIXED),
            S_FIXED @ np.eye(2) @ np.linalg.inv(S_FIXED)),
    }
    total = 0.0
    ok = []
    for name, (w, X) in specs.items():
        rep, elapsed = timed(lambda: delta_sweep(w, X, count=100, seed=42, tol=1e-6))
        total += elapsed
        ok.append(record(2, name, rep.max_abs_deviation <= 1e-6 and len(rep.samples) == 100,
                         f"max |Delta-1| = {rep.max_abs_deviation:.2e} over {len(rep.samples)}"))
    ok.append(record(2, "time", total < 30.0, f"{total:.2f} s < 30 s"))
    assert all(ok)


# --- 3. L2 mass against the stated bound ----------------------------------------------


@pytest.fixture(scope="module")
def mass_diag12():
    w = IndicatorWavelet.from_diagonal(np.diag([1.0, 2.0]))
    res, elapsed = timed(lambda: l2_mass(w, method="fubini"))
    return w, res.value, elapsed


def _mass_oracle_diag12():
    # 2|d_n| int_R [e^{-|u| tr} - e^{-(|u|+1) tr}] / tr du with d_n = 2, tr = 3
    tr, dn = 3.0, 2.0
    half, _ = sci.quad(lambda u: (math.exp(-u * tr) - math.exp(-(u + 1) * tr)) / tr,
                       0, np.inf, epsabs=0, epsrel=1e-13)
    return 2 * dn * 2 * half


def test_criterion_3_matches_oracle(mass_diag12):
    _, value, elapsed = mass_diag12
    ref = _mass_oracle_diag12()
    rel = abs(value - ref) / ref
    ok = [record(3, "oracle", rel <= 1e-8, f"fubini {value:.15g} vs quad {ref:.15g}, rel {rel:.1e}"),
          record(3, "time", elapsed < 1.0, f"{elapsed:.3f} s < 1 s")]
    assert all(ok)


def test_criterion_3_below_stated_bound(mass_diag12):
    w, value, _ = mass_diag12
    bound = stated_mass_bound(w)
    assert record(3, "strictly below 2|d_n|V_{n-1}(1)Gamma(n)/tr^{n+1}", value < bound,
                  f"mass {value:.6f} vs bound {bound:.6f}")


# --- 4. divergence exponents --------------------------------------------------------

RADII = (1, 2, 4, 8, 16, 32, 64)
TARGETS = {"trace-zero": 1.0, "rotation": 2.0, "shear": 1.0}


@pytest.fixture(scope="module")
def probes():
    out, elapsed = {}, 0.0
    for kind in TARGETS:
        g, dt = timed(lambda: divergence_probe(kind, RADII))
        out[kind] = g
        elapsed += dt
    return out, elapsed


@pytest.mark.parametrize("kind", list(TARGETS))
def test_criterion_4_divergence_exponent(probes, kind):
    g = probes[0][kind]
    target = TARGETS[kind]
    ok = abs(g.fitted_exponent - target) <= 0.05 and g.fit_quality >= 0.999
    assert record(4, kind, ok, f"slope {g.fitted_exponent:.4f} (target {target:.2f} +- 0.05), "
                  f"R^2 {g.fit_quality:.6f}")


def test_criterion_4_time(probes):
    elapsed = probes[1]
    assert record(4, "time", elapsed < 5.0, f"{elapsed:.2f} s < 5 s")


# --- 5. Lie product rate ------------------------------------------------------------


def test_criterion_5_lie_rate():
    X = np.array([[0.0, 1.0], [0.0, 0.0]])
    Y = np.array([[0.0, 0.0], [1.0, 0.0]])
    ms = [8, 16, 32, 64, 128, 256, 512, 1024]

    def run():
        table = lie_convergence_probe(X, Y, ms)
        final = spectral_norm(lie_product_approx(X, Y, 1024) - mat_exp(X + Y))
        return table, final
    (table, final), elapsed = timed(run)
    errs = [e for _, e in table]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    target = 1e-2 * spectral_norm(mat_exp(X + Y))
    ok = [record(5, "ratios", all(1.6 <= r <= 2.4 for r in ratios),
                 "ratios " + ", ".join(f"{r:.3f}" for r in ratios)),
          record(5, "m=1024", final <= target, f"{final:.3e} <= {target:.3e}"),
          record(5, "time", elapsed < 1.0, f"{elapsed:.3f} s < 1 s")]
    assert all(ok)


# --- 6. norm sandwich and monotonicity ----------------------------------------------


def test_criterion_6_norm_sandwich_and_monotonicity():
    rng = np.random.default_rng(6)
    samples = []
    for _ in range(10_000):
        n = int(rng.integers(2, 6))
        M, A = random_generator(rng, n, lam=(0.1, 3.0), skew=rng.uniform(0, 2))
        samples.append((M + A, rng.normal(size=n), rng.uniform(-5, 5)))

    def run():
        sandwich = monotone = 0
        worst = 0.0
        h = 0.5
        for X, v, t in samples:
            G = group_from_generator(X)
            lo, val, hi = norm_bounds_check(G, t, v)
            excess = max(lo - val, val - hi, 0.0) / val
            worst = max(worst, excess)
            sandwich += excess > 1e-9
            # norms along t = -5, -4.5, ..., 5 by repeated steps e^{hX}
            step = mat_exp(h * X)
            pts = np.empty((21, len(v)))
            pts[0] = orbit_point(G, -5.0, v)
            for k in range(20):
                pts[k + 1] = step @ pts[k]
            monotone += not np.all(np.diff(np.linalg.norm(pts, axis=1)) > 0)
        return sandwich, monotone, worst
    (sandwich, monotone, worst), elapsed = timed(run)
    ok = [record(6, "sandwich", sandwich == 0, f"{sandwich} violations, worst relative excess {worst:.1e}"),
          record(6, "monotone", monotone == 0, f"{monotone} non-monotone grids"),
          record(6, "time", elapsed < 10.0, f"{elapsed:.2f} s < 10 s")]
    assert all(ok)


# --- 7. orbit round trip ------------------------------------------------------------


def test_criterion_7_orbit_round_trip():
    rng = np.random.default_rng(7)
    pairs = []
    for _ in range(1000):
        n = int(rng.integers(2, 6))
        M, A = random_generator(rng, n)
        X = (M + A) * (1 if rng.random() < 0.5 else -1)
        pairs.append((group_from_generator(X), log_uniform_vector(rng, n)))

    def run():
        worst = 0.0
        bad = 0
        for G, xi in pairs:
            t, v = orbit_decompose(G, xi)
            rel = np.linalg.norm(orbit_point(G, t, v) - xi) / np.linalg.norm(xi)
            worst = max(worst, rel)
            bad += rel > 1e-9
        return bad, worst
    (bad, worst), elapsed = timed(run)
    ok = [record(7, "round trip", bad == 0, f"{bad} failures, worst relative {worst:.1e}"),
          record(7, "time", elapsed < 5.0, f"{elapsed:.2f} s < 5 s")]
    assert all(ok)


# --- 8. reconstruction --------------------------------------------------------------


def test_criterion_8_reconstruction():
    w = ProfileWavelet.from_generator(SHEAR)
    bad = ProfileWavelet(w.group, w.profile.scaled(0.5))  # profile norm 1/2
    f = gaussian_bump()
    err, t1 = timed(lambda: reconstruction_check(w, SHEAR, f, Grid()))
    ctl, t2 = timed(lambda: reconstruction_check(bad, SHEAR, f, Grid()))
    ok = [record(8, "admissible", err <= 1e-4, f"relative error {err:.2e} <= 1e-4"),
          record(8, "negative control", ctl >= 0.1, f"relative error {ctl:.3f} >= 0.1"),
          record(8, "time", t1 + t2 < 10.0, f"{t1 + t2:.2f} s < 10 s")]
    assert all(ok)


# --- 9. exponential and logarithm ---------------------------------------------------


def test_criterion_9_exp_log_oracles():
    rng = np.random.default_rng(9)
    big, small = [], []
    for _ in range(100):
        n = int(rng.integers(1, 7))
        X = rng.normal(size=(n, n))
        big.append(X * rng.uniform(0, 5) / spectral_norm(X))
        Z = rng.normal(size=(n, n))
        small.append(Z * rng.uniform(0, 0.1) / spectral_norm(Z))
    exps, t1 = timed(lambda: [mat_exp(X) for X in big])
    refs = [expm_series_longdouble(X) for X in big]
    rel = max(np.linalg.norm(E - R) / np.linalg.norm(R) for E, R in zip(exps, refs))
    logs, t2 = timed(lambda: [mat_log(mat_exp(X)) for X in small])
    rt = max(np.linalg.norm(L - X) for L, X in zip(logs, small))
    ok = [record(9, "exp oracle", rel <= 1e-12, f"max relative {rel:.1e} <= 1e-12"),
          record(9, "log round trip", rt <= 1e-10, f"max {rt:.1e} <= 1e-10"),
          record(9, "time", t1 + t2 < 2.0, f"{t1 + t2:.3f} s < 2 s")]
    assert all(ok)

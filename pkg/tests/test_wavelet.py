import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dilwave.errors import HypothesisViolation, InvalidInputError
from dilwave.matkit import mat_exp
from dilwave.orbit import group_from_generator
from dilwave.quadrature import integrate, integrate_indicator
from dilwave.verify import delta_integral
from dilwave.wavelet import (
    IndicatorWavelet,
    ProfileWavelet,
    TransportedWavelet,
    default_profile,
    make_profile,
    support_radius,
    tabulated_profile,
)

E = math.e


# --- profiles ----------------------------------------------------------------------


def test_default_profile():
    p = default_profile()
    assert p.N == 1.0
    assert p(0.0) == 0.0 and abs(p(1.0)) < 1e-15
    assert p(0.5) == math.sqrt(2)
    assert p(-0.1) == 0.0 and p(1.1) == 0.0
    assert abs(integrate(lambda t: p(t) ** 2, 0, 1, 1e-14).value - 1.0) < 1e-13


def test_make_profile_checks_norm_and_edges():
    with pytest.raises(InvalidInputError):
        make_profile(lambda t: math.sin(math.pi * t), 0, 1)  # squared norm 1/2
    with pytest.raises(InvalidInputError):
        make_profile(lambda t: math.sqrt(2) * math.cos(math.pi * t), 0, 1)  # jumps at 0
    with pytest.raises(InvalidInputError):
        make_profile(lambda t: 0.0, 0, math.inf)


def test_tabulated_profile_exact_norm():
    # hat of height h on [0, 2]: squared norm 2 h^2 / 3
    h = math.sqrt(1.5)
    p = tabulated_profile([0, 1, 2], [0, h, 0])
    assert p.l2_norm == pytest.approx(1.0, abs=1e-15)
    assert p(0.5) == pytest.approx(h / 2)
    q = tabulated_profile([0, 1, 3], [0, 5, 0], normalize=True)
    assert q.l2_norm == 1.0
    with pytest.raises(InvalidInputError):
        tabulated_profile([0, 1, 2], [0, 1, 0])
    with pytest.raises(InvalidInputError):
        tabulated_profile([0, 1, 2], [1, h, 0])


def _left_tail_profile():
    # phi(t) = 2 (t+2) e^{t+2} on (-inf, -2]: continuous, unit norm, N = -2
    return make_profile(lambda t: -2.0 * (t + 2.0) * math.exp(t + 2.0), -math.inf, -2.0)


# --- profile wavelet ---------------------------------------------------------------


def test_profile_wavelet_identity_group():
    w = ProfileWavelet.from_generator(np.eye(2))
    assert w.evaluate([0.0, 0.0]) == 0.0
    assert w.evaluate([math.exp(0.5), 0.0]) == pytest.approx(math.sqrt(2), rel=1e-12)


def test_profile_support_radius():
    w = ProfileWavelet.from_generator([[1, 1], [0, 1]])
    assert support_radius(w).radius == pytest.approx(math.exp(1.5))
    assert support_radius(w).bounded
    w2 = ProfileWavelet(group_from_generator(np.eye(2)), _left_tail_profile())
    assert support_radius(w2).radius == 1.0


def test_profile_wavelet_vanishes_exactly_outside_ball(rng):
    w = ProfileWavelet.from_generator([[1, 1], [0, 1]])
    R = w.support_radius().radius
    for _ in range(200):
        d = rng.normal(size=2)
        xi = d / np.linalg.norm(d) * R * rng.uniform(1.0 + 1e-12, 10)
        assert w.evaluate(xi) == 0.0


def test_profile_wavelet_continuous_at_origin():
    w = ProfileWavelet(group_from_generator([[1, 1], [0, 1]]), _left_tail_profile())
    vals = [abs(w.evaluate([r, -0.3 * r])) for r in (1e-3, 1e-4, 1e-5, 1e-6)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-2


def test_profile_wavelet_uses_transpose_group():
    # psi((e^{sX})^T xi) = phi(t0 + s) only holds with the transpose group
    X = np.array([[1.0, 2.0], [-0.5, 1.0]])
    w = ProfileWavelet.from_generator(X)
    xi = np.array([0.4, 0.9])
    wrong = ProfileWavelet.from_generator(X.T)
    s = 0.3
    moved = mat_exp(s * X).T @ xi
    t_xi = w.orbit_window(X, xi)[0]  # window start is -t0
    assert w.evaluate(moved) == pytest.approx(w.profile(s - t_xi), abs=1e-12)
    assert abs(wrong.evaluate(moved) - wrong.profile(s - t_xi)) > 1e-3


def test_profile_rejects_mixed_symmetric_part():
    with pytest.raises(HypothesisViolation):
        ProfileWavelet.from_generator(np.diag([1.0, -2.0]))


# --- indicator wavelet -------------------------------------------------------------


def test_indicator_examples():
    w = IndicatorWavelet.from_diagonal(np.eye(2))
    assert w.evaluate([0.0, 1 / E]) == 1.0
    assert w.evaluate([0.0, E]) == 0.0
    assert w.evaluate([3.0, 0.0]) == 0.0
    assert not support_radius(w).bounded


def test_indicator_permutes_zero_dilation_axis():
    w = IndicatorWavelet.from_diagonal(np.diag([1.0, 0.0]))
    assert w.permutation.tolist() == [1, 0]
    assert w.chart_diagonal.tolist() == [0.0, 1.0]


def test_indicator_negative_trace_reverses():
    w = IndicatorWavelet.from_diagonal(np.diag([1.0, -2.0]))
    assert w.reversed
    assert w.chart_diagonal.tolist() == [-1.0, 2.0]
    assert w.trace == 1.0


def test_indicator_rejects_trace_zero_and_nondiagonal():
    with pytest.raises(HypothesisViolation):
        IndicatorWavelet.from_diagonal(np.diag([1.0, -1.0]))
    with pytest.raises(InvalidInputError):
        IndicatorWavelet.from_diagonal([[1, 1], [0, 1]])


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.05, 3))
def test_indicator_binary_and_mirror_symmetric(a, b, c):
    w = IndicatorWavelet.from_diagonal(np.diag([1.0, 2.0, -0.5]))
    xi = np.array([a, b, c])
    v = w.evaluate(xi)
    assert v in (0.0, 1.0)
    mirrored = xi.copy()
    mirrored[w.permutation[-1]] *= -1
    assert w.evaluate(mirrored) == v


@pytest.mark.parametrize("D", [np.diag([1.0, 2.0]), np.diag([1.0, -2.0]), np.diag([0.5, 1.0, 1.5])])
@pytest.mark.parametrize("u", [0.0, 0.7, 2.5])
def test_indicator_slab_has_unit_length(D, u):
    w = IndicatorWavelet.from_diagonal(D)
    d = w.chart_diagonal
    k = len(d) - 1
    uvec = np.full(k, u / math.sqrt(k))
    inv = np.argsort(w.permutation)

    def f(tau):
        eta = np.append(uvec * np.exp(tau * d[:-1]), math.exp(tau * d[-1]))
        return w.evaluate(eta[inv])
    res = integrate_indicator(f, -u - 3, -u + 2, grid=256)
    assert abs(res.value - 1.0) < 1e-10


def test_evaluate_many_matches_scalar(rng):
    w = IndicatorWavelet.from_diagonal(np.diag([1.0, -2.0, 3.0]))
    pts = rng.normal(size=(500, 3)) * 0.5
    pts[::7, w.permutation[-1]] = 0.0
    assert np.array_equal(w.evaluate_many(pts), [w.evaluate(p) for p in pts])


# --- transported wavelets ----------------------------------------------------------


def test_transport_identity_is_base(rng):
    base = IndicatorWavelet.from_diagonal(np.diag([1.0, 2.0]))
    t = TransportedWavelet.from_similarity(base, np.eye(2))
    for xi in rng.normal(size=(100, 2)):
        assert t.evaluate(xi) == base.evaluate(xi)


def test_transport_example():
    base = IndicatorWavelet.from_diagonal(np.eye(2))
    t = TransportedWavelet.from_similarity(base, np.diag([2.0, 1.0]))
    assert t.evaluate([0.0, 1 / E]) == 1.0
    assert np.allclose(t.generator, np.eye(2))


def test_transport_rejects_singular():
    base = IndicatorWavelet.from_diagonal(np.eye(2))
    with pytest.raises(InvalidInputError):
        TransportedWavelet.from_similarity(base, [[1, 2], [2, 4]])
    with pytest.raises(InvalidInputError):
        TransportedWavelet.from_similarity(base, np.eye(3))


def test_transport_direction_with_noncommuting_similarity(rng):
    # X = S Y S^{-1}: psi(xi) = base(S^T xi) is a wavelet for G_X; base((S^T)^{-1} xi) is not
    base = IndicatorWavelet.from_diagonal(np.diag([1.0, 2.0]))
    S = np.array([[1.3, 0.6], [-0.4, 0.9]])
    good = TransportedWavelet.from_similarity(base, S)
    X = good.generator
    bad = TransportedWavelet.from_similarity(base, np.linalg.inv(S).T)
    devs_good, devs_bad = [], []
    for _ in range(10):
        xi = rng.normal(size=2)
        devs_good.append(abs(delta_integral(good, X, xi).value - 1))
        devs_bad.append(abs(delta_integral(bad, X, xi, 1e-6).value - 1))
    assert max(devs_good) < 1e-9
    assert max(devs_bad) > 0.05


def test_transport_support_radius():
    base = ProfileWavelet.from_generator(np.eye(2))
    S = np.diag([2.0, 0.5])
    t = TransportedWavelet.from_similarity(base, S)
    R = t.support_radius().radius
    assert R == pytest.approx(math.e * 2.0)
    # nonzero only inside R
    assert t.evaluate([R * 1.0001, 0]) == 0.0 and t.evaluate([0, R * 1.0001]) == 0.0


@pytest.mark.parametrize("D", [np.diag([1.0, 2.0]), np.diag([1.0, -2.0]), np.diag([0.5, 1.0, -0.25])])
def test_orbit_integrand_matches_literal(D, rng):
    w = IndicatorWavelet.from_diagonal(D)
    X = 0.7 * w.generator
    for _ in range(20):
        xi = rng.normal(size=len(D))
        f, origin, (a, b) = w.orbit_integrand(X, xi)
        lo, hi = w.orbit_window(X, xi)
        assert origin + a == pytest.approx(lo, abs=1e-9) and origin + b == pytest.approx(hi, abs=1e-9)
        for t in np.linspace(lo - 0.5, hi + 0.5, 41):
            if min(abs(t - lo), abs(t - hi)) < 1e-9:
                continue
            assert f(t - origin) == w.evaluate(mat_exp(t * X).T @ xi) ** 2


def test_orbit_integrand_other_generator_is_none():
    w = IndicatorWavelet.from_diagonal(np.diag([1.0, 2.0]))
    assert w.orbit_integrand(np.eye(2), [1.0, 1.0]) is None
    f, _, (a, b) = w.orbit_integrand(w.generator, [1.0, 0.0])
    assert f(0.3) == 0.0 and a == b

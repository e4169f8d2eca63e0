"""Independent reference computations used by the tests."""

import numpy as np


def expm_series_longdouble(X, max_terms=400):
    """Power series of e^X summed in long double after scaling by 2^-s.

    Independent of the package kernel: plain term recursion, no
    Paterson-Stockmeyer, extended precision accumulation.
    """
    X = np.asarray(X, dtype=np.longdouble)
    n = X.shape[0]
    nrm = float(np.sqrt(np.sum(X * X)))
    s = max(0, int(np.ceil(np.log2(nrm))) + 1) if nrm > 0 else 0
    A = X / np.longdouble(2) ** s
    E = np.eye(n, dtype=np.longdouble)
    term = np.eye(n, dtype=np.longdouble)
    for k in range(1, max_terms):
        term = term @ A / k
        E = E + term
        if np.max(np.abs(term)) <= np.finfo(np.longdouble).eps * np.max(np.abs(E)) * 1e-3:
            break
    for _ in range(s):
        E = E @ E
    return np.asarray(E, dtype=float)


def random_generator(rng, n, lam=(0.5, 2.0), skew=1.0):
    """M + A with spec(M) uniform in ``lam`` and A = skew * (B - B^T)."""
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    M = Q @ np.diag(rng.uniform(*lam, n)) @ Q.T
    M = 0.5 * (M + M.T)
    B = rng.normal(size=(n, n))
    return M, skew * (B - B.T)


def log_uniform_vector(rng, n, lo=1e-3, hi=1e3):
    d = rng.normal(size=n)
    while not np.linalg.norm(d) > 0:
        d = rng.normal(size=n)
    return d / np.linalg.norm(d) * 10 ** rng.uniform(np.log10(lo), np.log10(hi))

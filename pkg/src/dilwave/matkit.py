"""Small dense real-matrix kernels.

Matrices are plain ``numpy.ndarray`` of shape ``(n, n)``, ``float64``, with
``1 <= n <= 8``. Nothing here calls into LAPACK: the exponential is a scaled
Taylor series, the logarithm is its power series, the symmetric eigensolver
is cyclic Jacobi and the general one is Hessenberg reduction followed by
shifted complex QR. At these sizes that is both fast enough and easy to audit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .errors import DomainError, InvalidInputError, NumericError

__all__ = [
    "Spectrum",
    "as_matrix",
    "eigen_general",
    "is_symmetric",
    "lie_product_approx",
    "mat_exp",
    "mat_log",
    "spectral_norm",
    "split_sym_antisym",
    "sym_eigen",
]


def as_matrix(X, *, max_dim: int = DEFAULTS.max_dim) -> np.ndarray:
    """Validate and copy ``X`` into a finite square float64 array."""
    try:
        A = np.array(X, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"not a real matrix: {exc}") from None
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"matrix must be square, got shape {A.shape}")
    if not 1 <= A.shape[0] <= max_dim:
        raise InvalidInputError(f"dimension must be in [1, {max_dim}], got {A.shape[0]}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix has non-finite entries")
    return A


# ---------------------------------------------------------------------------
# exponential / logarithm


def _taylor_coefficients(order: int) -> np.ndarray:
    return np.array([1.0 / math.factorial(k) for k in range(order + 1)])


_PS_CACHE: dict[int, np.ndarray] = {}
_EYE = [np.eye(n) for n in range(DEFAULTS.max_dim + 1)]


def _ps_blocks(order: int) -> np.ndarray:
    # Taylor coefficients grouped in blocks of 4 for Paterson-Stockmeyer
    blocks = _PS_CACHE.get(order)
    if blocks is None:
        nblocks = order // 4 + 1
        padded = np.zeros(4 * nblocks)
        padded[: order + 1] = _taylor_coefficients(order)
        blocks = _PS_CACHE[order] = padded.reshape(nblocks, 4)
    return blocks


def _expm(X: np.ndarray, order: int = DEFAULTS.exp_order,
          target: float = DEFAULTS.exp_scaled_norm) -> np.ndarray:
    # unchecked core; Frobenius norm bounds the spectral norm from above
    n = X.shape[0]
    nrm = math.sqrt(float(np.vdot(X, X)))
    s = 0
    if nrm > target:
        s = int(math.ceil(math.log2(nrm / target)))
    A = X * (0.5 ** s) if s else X

    # Paterson-Stockmeyer with block size 4: p(A) = sum_j B_j(A) (A^4)^j
    coef = _ps_blocks(order)
    powers = np.empty((4, n, n))
    powers[0] = _EYE[n]
    powers[1] = A
    np.matmul(A, A, out=powers[2])
    np.matmul(powers[2], A, out=powers[3])
    A4 = powers[2] @ powers[2]
    blocks = (coef @ powers.reshape(4, n * n)).reshape(-1, n, n)
    E = blocks[-1]
    for j in range(len(blocks) - 2, -1, -1):
        E = E @ A4 + blocks[j]

    for _ in range(s):
        E = E @ E
    return E


def mat_exp(X) -> np.ndarray:
    """Matrix exponential by scaling and squaring.

    ``X`` is scaled by ``2**-s`` until its Frobenius norm is at most 0.5,
    the order-16 Taylor polynomial is evaluated, and the result squared
    ``s`` times. Relative error is ~1e-14 for well-behaved inputs with
    ``|X| <= 50``.
    """
    return _expm(as_matrix(X))


def mat_log(A, *, tol=DEFAULTS) -> np.ndarray:
    """Principal logarithm from the series sum (-1)^(m+1) (A - I)^m / m.

    Only defined for ``|A - I| < 1`` in the spectral norm. Convergence is
    geometric with ratio ``|A - I|`` so the series is slow close to the
    boundary; a ``RuntimeWarning`` is issued above ``tol.log_warn_radius``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    B = A - np.eye(n)
    r = spectral_norm(B)
    if r >= 1.0:
        raise DomainError(f"logarithm series needs |A - I| < 1, got |A - I| = {r:.6g}")
    if r > tol.log_warn_radius:
        warnings.warn(
            f"|A - I| = {r:.4f} is close to 1; the log series converges slowly",
            RuntimeWarning,
            stacklevel=2,
        )
    if r == 0.0:
        return np.zeros_like(A)

    L = B.copy()
    power = B.copy()
    for m in range(2, tol.log_max_terms + 1):
        power = power @ B
        term = power / m
        if m % 2 == 0:
            L -= term
        else:
            L += term
        if np.linalg.norm(term) <= tol.log_term_ratio * np.linalg.norm(L):
            return L
    raise NumericError(
        f"log series did not converge in {tol.log_max_terms} terms",
        radius=r,
        last_term=float(np.linalg.norm(term)),
    )


def lie_product_approx(X, Y, m: int) -> np.ndarray:
    """``(e^{X/m} e^{Y/m})^m``, which tends to ``e^{X+Y}`` at rate O(1/m)."""
    X, Y = as_matrix(X), as_matrix(Y)
    if X.shape != Y.shape:
        raise InvalidInputError(f"shape mismatch {X.shape} vs {Y.shape}")
    if int(m) != m or m < 1:
        raise InvalidInputError(f"m must be a positive integer, got {m!r}")
    step = _expm(X / m) @ _expm(Y / m)
    return np.linalg.matrix_power(step, int(m))


# ---------------------------------------------------------------------------
# splitting and symmetric eigenproblem


def split_sym_antisym(X) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(M, A)`` with ``M`` symmetric, ``A`` antisymmetric, ``M + A = X``.

    Symmetry of both parts is exact in floating point; the sum reproduces
    ``X`` up to one rounding per entry.
    """
    X = as_matrix(X)
    M = 0.5 * (X + X.T)
    A = 0.5 * (X - X.T)
    return M, A


def is_symmetric(S: np.ndarray, rtol: float = DEFAULTS.symmetry) -> bool:
    scale = np.max(np.abs(S))
    return bool(np.max(np.abs(S - S.T)) <= rtol * scale) if scale > 0 else True


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted by descending real part, then descending imaginary part."""

    eigenvalues: np.ndarray
    is_real_diagonalizable: bool
    gap: float
    vectors: np.ndarray | None = None

    @property
    def real(self) -> np.ndarray:
        return self.eigenvalues.real

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.eigenvalues.imag == 0))

    def __len__(self) -> int:
        return len(self.eigenvalues)


def _sorted_order(values: np.ndarray) -> np.ndarray:
    return np.lexsort((-values.imag, -values.real))


def _min_gap(values: np.ndarray) -> float:
    if len(values) < 2:
        return math.inf
    diff = np.abs(values[:, None] - values[None, :])
    diff[np.diag_indices(len(values))] = np.inf
    return float(diff.min())


def _jacobi(S: np.ndarray, tol: float, max_sweeps: int = 60, vectors: bool = True):
    # cyclic Jacobi on nested lists: for the small matrices here Python
    # floats beat numpy slicing by an order of magnitude
    n = S.shape[0]
    a = S.tolist()
    V = np.eye(n).tolist() if vectors else []
    total = float(np.linalg.norm(S))
    if total == 0.0:
        return np.zeros(n), np.eye(n)
    for sweep in range(max_sweeps):
        off = math.sqrt(sum(a[i][j] * a[i][j] for i in range(n) for j in range(n) if i != j))
        if off <= tol * total:
            return np.array([a[i][i] for i in range(n)]), np.array(V) if vectors else None
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                # a huge (even infinite) theta just means a vanishing rotation, t -> 0
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                for row in a:
                    x, y = row[p], row[q]
                    row[p] = c * x - s * y
                    row[q] = s * x + c * y
                rp, rq = a[p], a[q]
                for k in range(n):
                    x, y = rp[k], rq[k]
                    rp[k] = c * x - s * y
                    rq[k] = s * x + c * y
                rp[q] = rq[p] = 0.0
                for row in V:
                    x, y = row[p], row[q]
                    row[p] = c * x - s * y
                    row[q] = s * x + c * y
    raise NumericError(
        f"Jacobi did not converge in {max_sweeps} sweeps",
        off_diagonal=off,
        scale=total,
    )


def sym_eigen(S, *, tol=DEFAULTS) -> Spectrum:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    The returned ``Spectrum.vectors`` is the accumulated rotation ``O`` with
    ``S = O diag(eigenvalues) O^T``; its columns follow the sorted order.
    """
    S = as_matrix(S)
    if not is_symmetric(S, tol.symmetry):
        raise InvalidInputError("sym_eigen needs a symmetric matrix")
    vals, vecs = _jacobi(0.5 * (S + S.T), tol.jacobi_offdiag)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    return Spectrum(
        eigenvalues=vals.astype(complex),
        is_real_diagonalizable=True,
        gap=_min_gap(vals),
        vectors=vecs[:, order],
    )


def spectral_norm(X) -> float:
    """Largest singular value, as ``sqrt(max eig(X^T X))``."""
    X = np.asarray(X, dtype=float)
    scale = float(np.max(np.abs(X))) if X.size else 0.0
    if scale == 0.0:
        return 0.0
    Xs = X / scale  # keeps X^T X clear of under/overflow
    G = Xs.T @ Xs
    vals, _ = _jacobi(0.5 * (G + G.T), DEFAULTS.jacobi_offdiag, vectors=False)
    return scale * math.sqrt(max(float(vals.max()), 0.0))


# ---------------------------------------------------------------------------
# general eigenproblem


def _hessenberg(A: np.ndarray) -> np.ndarray:
    H = A.copy()
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1 :, k]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(nx, x[0]) if x[0] != 0 else nx
        v /= np.linalg.norm(v)
        H[k + 1 :, k:] -= 2.0 * np.outer(v, v @ H[k + 1 :, k:])
        H[:, k + 1 :] -= 2.0 * np.outer(H[:, k + 1 :] @ v, v)
        H[k + 2 :, k] = 0.0
    return H


def _eig2(a, b, c, d):
    tr = a + d
    disc = np.sqrt(complex(0.25 * (a - d) ** 2 + b * c))
    half = 0.5 * tr
    l1 = half + disc if (half.real * disc.real + half.imag * disc.imag) >= 0 else half - disc
    det = a * d - b * c
    l2 = det / l1 if l1 != 0 else half - (l1 - half)
    return l1, l2


def _wilkinson_shift(a, b, c, d):
    tr = a + d
    det = a * d - b * c
    disc = np.sqrt(complex(tr * tr / 4.0 - det))
    l1 = tr / 2.0 + disc
    l2 = tr / 2.0 - disc
    return l1 if abs(l1 - d) < abs(l2 - d) else l2


def _hqr(H: np.ndarray, max_iter: int) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix by single-shift complex QR."""
    H = H.astype(complex)
    n = H.shape[0]
    eps = np.finfo(float).eps
    scale = max(float(np.linalg.norm(H)), np.finfo(float).tiny)
    eig = []
    hi = n
    its = 0
    total = 0
    while hi > 0:
        if hi == 1:
            eig.append(H[0, 0])
            break
        l = hi - 1
        while l > 0:
            s = abs(H[l, l]) + abs(H[l - 1, l - 1])
            if s == 0.0:
                s = scale
            # global floor too: non-normal inputs leave eps*|H| noise behind
            if abs(H[l, l - 1]) <= eps * max(s, scale):
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi - 1:
            eig.append(H[hi - 1, hi - 1])
            hi -= 1
            its = 0
            continue
        if l == hi - 2:
            eig.extend(_eig2(H[l, l], H[l, l + 1], H[l + 1, l], H[l + 1, l + 1]))
            hi -= 2
            its = 0
            continue
        its += 1
        total += 1
        if total > max_iter:
            sub = [abs(H[k, k - 1]) for k in range(1, hi)]
            raise NumericError(
                f"shifted QR did not converge in {max_iter} iterations",
                subdiagonal=sub,
                active_block=(l, hi),
            )
        if its % 11 == 0:
            # exceptional shift breaks symmetric stalls
            mu = H[hi - 1, hi - 1] + 0.75 * abs(H[hi - 1, hi - 2])
        else:
            mu = _wilkinson_shift(H[hi - 2, hi - 2], H[hi - 2, hi - 1],
                                  H[hi - 1, hi - 2], H[hi - 1, hi - 1])
        B = H[l:hi, l:hi] - mu * np.eye(hi - l)
        m = hi - l
        rots = []
        for k in range(m - 1):
            x, y = B[k, k], B[k + 1, k]
            r = math.hypot(abs(x), abs(y))
            if r == 0.0:
                G = np.eye(2, dtype=complex)
            else:
                G = np.array([[np.conj(x) / r, np.conj(y) / r], [-y / r, x / r]])
            B[k : k + 2, k:] = G @ B[k : k + 2, k:]
            rots.append(G)
        for k, G in enumerate(rots):
            B[: k + 2, k : k + 2] = B[: k + 2, k : k + 2] @ G.conj().T
        H[l:hi, l:hi] = B + mu * np.eye(m)
    return np.array(eig, dtype=complex)


def _conjugate_cleanup(vals: np.ndarray, imag_tol: float) -> np.ndarray:
    # input matrices are real: snap near-real roots, then pair the rest
    vals = vals.copy()
    small = np.abs(vals.imag) <= imag_tol
    vals[small] = vals[small].real
    upper = [i for i in range(len(vals)) if vals[i].imag > 0]
    lower = [i for i in range(len(vals)) if vals[i].imag < 0]
    for i in upper:
        if not lower:
            vals[i] = vals[i].real
            continue
        j = min(lower, key=lambda k: abs(vals[k] - np.conj(vals[i])))
        lower.remove(j)
        avg = 0.5 * (vals[i] + np.conj(vals[j]))
        vals[i] = avg
        vals[j] = np.conj(avg)
    for j in lower:
        vals[j] = vals[j].real
    return vals


def eigen_general(X, *, tol=DEFAULTS) -> Spectrum:
    """Eigenvalues of a real matrix (n <= 8), conjugate pairs enforced.

    ``is_real_diagonalizable`` is deliberately conservative: it is set only
    when every eigenvalue is real and either the eigenvalues are pairwise
    separated by more than ``tol.eigen_gap * |X|`` or ``X`` is symmetric.
    Repeated eigenvalues of a non-symmetric matrix are reported as not
    provably diagonalizable even when they are.
    """
    X = as_matrix(X)
    n = X.shape[0]
    norm = spectral_norm(X)
    if is_symmetric(X, tol.symmetry):
        spec = sym_eigen(X, tol=tol)
        return Spectrum(spec.eigenvalues, True, spec.gap)

    vals = _hqr(_hessenberg(X), max_iter=60 * n)
    vals = _conjugate_cleanup(vals, tol.eigen_imag * max(1.0, norm))
    vals = vals[_sorted_order(vals)]
    gap = _min_gap(vals)
    all_real = bool(np.all(vals.imag == 0))
    diag = all_real and gap > tol.eigen_gap * norm
    return Spectrum(vals, diag, gap)

"""Central numerical tolerances.

Every function that needs a threshold reads it from ``DEFAULTS`` unless the
caller passes an explicit value, so a single ``Tolerances`` instance pins
the behaviour of a whole run.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    symmetry: float = 1e-12          # relative, for "is this matrix symmetric"
    jacobi_offdiag: float = 1e-14    # relative off-diagonal Frobenius norm
    exp_scaled_norm: float = 0.5     # scaling target for mat_exp
    exp_order: int = 16              # Taylor order used after scaling
    log_term_ratio: float = 1e-16    # series stop: |term| / |sum|
    log_warn_radius: float = 0.9     # |A - I| above this warns (slow series)
    log_max_terms: int = 200_000
    eigen_gap: float = 1e-8          # relative distinctness for eigenvalues
    eigen_imag: float = 1e-10        # relative |imag| below which a root is real
    zero_eigen: float = 1e-9         # relative |lambda| below which it counts as zero
    decision: float = 1e-9           # trace / sign thresholds in admit
    zero_band: float = 1e-3          # NotAdmissible needs |tr| <= decision * zero_band
    orbit_residual: float = 1e-12    # |log-norm| residual for the orbit solve
    quadrature: float = 1e-6         # default absolute tolerance for Delta
    max_dim: int = 8


DEFAULTS = Tolerances()

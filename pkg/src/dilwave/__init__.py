"""Admissibility of one-parameter matrix dilation groups and explicit wavelets for them."""

from .admit import Criterion, Status, Verdict, decide
from .config import DEFAULTS, Tolerances
from .errors import (
    DilwaveError,
    DomainError,
    HypothesisViolation,
    InvalidInputError,
    MethodError,
    NumericError,
    ParseError,
    TruncationError,
)
from .matkit import (
    eigen_general,
    lie_product_approx,
    mat_exp,
    mat_log,
    spectral_norm,
    split_sym_antisym,
    sym_eigen,
)
from .orbit import group_from_generator, orbit_decompose, orbit_point, orbit_time
from .verify import (
    delta_integral,
    delta_sweep,
    divergence_probe,
    l2_mass,
    lie_convergence_probe,
    reconstruction_check,
)
from .wavelet import (
    IndicatorWavelet,
    ProfileWavelet,
    TransportedWavelet,
    default_profile,
    tabulated_profile,
)

__version__ = "0.1.0"

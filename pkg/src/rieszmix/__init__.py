"""Riesz distributions on the SPD cone, their Poisson mixture, and the
natural exponential family it generates."""

from .distributions import (
    mixture_log_density,
    mixture_log_density_series,
    riesz_log_density,
    riesz_log_laplace,
    sample_mixture,
    sample_poisson,
    sample_riesz,
)
from .errors import (
    BoundaryShape,
    ConvergenceError,
    DimensionMismatch,
    DomainError,
    IndexOutOfRange,
    NotPositiveDefinite,
    OutOfDomain,
    PoleError,
    RieszMixError,
    UnsupportedOrder,
)
from .nef import (
    b_coeffs,
    cumulant,
    delta_star_at_psi,
    inverse_mean_map,
    mean_map,
    variance_function,
)
from .specfun import g_series, log_bessel_i, log_gamma_omega

__version__ = "0.1.0"

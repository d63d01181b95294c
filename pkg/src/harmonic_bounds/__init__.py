"""Certified bounds for H_n - ln n - gamma with exact and interval arithmetic."""

from .bounds import (
    BoundFamily,
    BoundPair,
    franel_bounds,
    phi,
    residual,
    sharp_bounds,
    sharp_constant,
    toth_mare_bounds,
)
from .exact import bernoulli_number, bernoulli_polynomial, harmonic_exact
from .psi import (
    PrecisionError,
    PsiEnclosure,
    digamma_residual_enclosure,
    euler_gamma_enclosure,
    gamma_enclosure,
    trigamma_residual_enclosure,
)
from .realnum import Interval, IntervalDivisionError, from_rational, interval_arith, ln_enclosure
from .verify import (
    VerifyReport,
    verify_integrand_signs,
    verify_lemma_brackets,
    verify_phi_derivative_sign,
    verify_phi_monotone,
    verify_series_coefficients,
    verify_theorem,
)

__version__ = "0.1.0"

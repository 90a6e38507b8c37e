"""Rank-1 randomised Horn problems on Herm(n), Herm+(n) and U(n).

Samplers for the three random-matrix models, their closed-form eigenvalue
densities, the spherical functions and regularised transforms behind them,
and a Monte Carlo harness that checks one against the other.
"""

from .densities import (
    cdf_marginal,
    circular_interlaces,
    interlaces,
    pdf_additive,
    pdf_mult_pos,
    pdf_mult_unitary,
    resolve_constraint,
)
from .estimators import EigenvalueTransformer, RankOneHorn, SphericalFunctionTransformer
from .exceptions import HornError
from .harness import VerificationReport, ks_statistic, run_verify
from .instance import HornCase, HornInstance
from .matrix_core import PhaseSpectrum, Spectrum
from .rng import RngStream
from .sampling import (
    haar_unitary,
    sample_additive_rank1,
    sample_gue,
    sample_mult_pos,
    sample_mult_unitary,
    sample_singular_rank1,
)
from .spherical import (
    char_rank1,
    char_spherical,
    gn_rank1,
    gn_spherical,
    hciz,
    hciz_rank1,
    mc_factorization_check,
)
from .transforms import (
    forward_transform_check,
    inverse_hermitian_quadrature,
    inverse_pos_quadrature,
    inverse_unitary_series,
    pdf_regularizer,
    theta_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "HornCase",
    "HornInstance",
    "HornError",
    "RngStream",
    "Spectrum",
    "PhaseSpectrum",
    "haar_unitary",
    "sample_gue",
    "sample_additive_rank1",
    "sample_mult_pos",
    "sample_mult_unitary",
    "sample_singular_rank1",
    "hciz",
    "hciz_rank1",
    "gn_spherical",
    "gn_rank1",
    "char_spherical",
    "char_rank1",
    "mc_factorization_check",
    "interlaces",
    "circular_interlaces",
    "resolve_constraint",
    "pdf_additive",
    "pdf_mult_pos",
    "pdf_mult_unitary",
    "cdf_marginal",
    "theta_kernel",
    "inverse_unitary_series",
    "inverse_hermitian_quadrature",
    "inverse_pos_quadrature",
    "forward_transform_check",
    "pdf_regularizer",
    "ks_statistic",
    "run_verify",
    "VerificationReport",
    "RankOneHorn",
    "EigenvalueTransformer",
    "SphericalFunctionTransformer",
]

"""Recovery of a continuous angular power spectrum from uniform linear
array covariance lags, with exact energy/error certificates.

The covariance lags of a ULA are weighted Fourier measurements of the
spectrum after the change of variables x = sin(theta). The recovery
returns the unique minimum-norm spectrum consistent with the lags, which
is a trigonometric polynomial of fixed order determined by the array, and
certifies it with closed-form energy identities and an identifiability
test.

Typical use::

    from apsrec import ArrayConfig, GaussianMixture, certify, recover, synthesize_lags

    cfg = ArrayConfig(M=8, gamma=1.0)
    truth = GaussianMixture(components=((0.3, 0.05, 1.0),))
    lags = synthesize_lags(truth, cfg)
    solution = recover(lags, cfg)
    report = certify(truth, cfg)
"""

from .analysis import (
    DEFAULT_IDENTIFIABILITY_TOL,
    ErrorCertificate,
    certify,
    energy_of_solution,
    resolution_sweep,
)
from .core import (
    ApsModel,
    ArrayConfig,
    CovarianceLags,
    Domain,
    GaussianMixture,
    LaplacianMixture,
    PointSources,
    SampledFunction,
    SpectrumSum,
    TrigCoeffs,
    TrigPolynomial,
    Uniform,
    evaluate_trig,
    lags_from_toeplitz,
    toeplitz_from_lags,
    transform_aps,
    trig_basis,
)
from .errors import (
    ConditioningError,
    ConfigError,
    DomainError,
    FeasibilityWarning,
    ModelError,
    QuadratureError,
    StructureError,
)
from .forward import SynthesisOptions, synthesize_covariance, synthesize_lags
from .gram import (
    GramMatrix,
    MeasurementVector,
    assemble_gram,
    gram_blocks,
    measurement_vector,
    solve,
)
from .plv import (
    NegativitySummary,
    PlvSolution,
    evaluate_solution,
    negativity_summary,
    project_onto_nperp,
    recover,
    recover_from_matrix,
)
from .quad import (
    QuadratureRule,
    chebyshev_gauss,
    gauss_legendre,
    integrate_theta,
    integrate_theta_complex,
    weighted_inner,
    weighted_inner_complex,
    weighted_integral,
)
from .specfun import bessel_j0, bessel_j0_quadrature_oracle

__version__ = "0.1.0"

__all__ = [
    "ApsModel",
    "ArrayConfig",
    "ConditioningError",
    "ConfigError",
    "CovarianceLags",
    "DEFAULT_IDENTIFIABILITY_TOL",
    "Domain",
    "DomainError",
    "ErrorCertificate",
    "FeasibilityWarning",
    "GaussianMixture",
    "GramMatrix",
    "LaplacianMixture",
    "MeasurementVector",
    "ModelError",
    "NegativitySummary",
    "PlvSolution",
    "PointSources",
    "QuadratureError",
    "QuadratureRule",
    "SampledFunction",
    "SpectrumSum",
    "StructureError",
    "SynthesisOptions",
    "TrigCoeffs",
    "TrigPolynomial",
    "Uniform",
    "assemble_gram",
    "bessel_j0",
    "bessel_j0_quadrature_oracle",
    "certify",
    "chebyshev_gauss",
    "energy_of_solution",
    "evaluate_solution",
    "evaluate_trig",
    "gauss_legendre",
    "gram_blocks",
    "integrate_theta",
    "integrate_theta_complex",
    "lags_from_toeplitz",
    "measurement_vector",
    "negativity_summary",
    "project_onto_nperp",
    "recover",
    "recover_from_matrix",
    "resolution_sweep",
    "solve",
    "synthesize_covariance",
    "synthesize_lags",
    "toeplitz_from_lags",
    "transform_aps",
    "trig_basis",
    "weighted_inner",
    "weighted_inner_complex",
    "weighted_integral",
]

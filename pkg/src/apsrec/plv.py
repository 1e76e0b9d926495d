"""Minimum-norm spectrum recovery.

Among all transformed densities consistent with the observed lags, the
recovered one is the unique element that is also a trigonometric
polynomial at the array's frequencies: the orthogonal projection of the
origin onto the affine feasible set. Its coefficients come from one
positive-definite solve, and feasibility is re-checked a posteriori by
quadrature against every lag constraint.

No positivity is imposed anywhere: a reconstruction may dip negative
(typically for spectra far outside the representable subspace), and it is
reported verbatim with a negativity summary rather than clipped, since
clipping would silently break every energy identity downstream.
"""

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (
    ApsModel,
    ArrayConfig,
    CovarianceLags,
    Domain,
    HALF_PI,
    SampledFunction,
    TrigCoeffs,
    evaluate_trig,
    lags_from_toeplitz,
    seams_x,
    transform_aps,
    trig_basis,
)
from .errors import DomainError, FeasibilityWarning
from .gram import assemble_gram, measurement_vector, solve
from .quad import CHEBYSHEV_GAUSS, chebyshev_gauss, weighted_quadrature_points

DEFAULT_RESIDUAL_TOL = 1e-8


def _auto_nodes(cfg):
    # Enough panels to resolve products of basis functions at the top
    # frequency 2*kappa_{M-1}; generous floor for small arrays.
    return max(256, int(4 * cfg.gamma * cfg.M) + 64)


@dataclass(frozen=True)
class PlvSolution:
    """Recovered minimum-norm spectrum.

    ``constraint_residual`` is the worst absolute mismatch, recomputed by
    quadrature, between the solution's lags and the observed ones; it is
    numerical noise (not model error) because the feasible set always
    intersects the trigonometric subspace exactly.
    """

    coeffs: TrigCoeffs
    constraint_residual: float
    cfg: ArrayConfig

    def g(self, x):
        """Transformed density g(x) of the reconstruction."""
        return evaluate_trig(self.cfg, self.coeffs, x)

    def rho(self, theta):
        """Angular density rho(theta) = g(sin theta) of the reconstruction."""
        return self.g(np.sin(np.asarray(theta, dtype=np.float64)))


def _lags_of_coeffs(cfg, coeffs, nodes):
    points, weights = weighted_quadrature_points(nodes)
    samples = weights * evaluate_trig(cfg, coeffs, points)
    return np.exp(1j * np.multiply.outer(cfg.kappas(cfg.M), points)) @ samples


def recover(lags, cfg, residual_tol=DEFAULT_RESIDUAL_TOL, residual_nodes=None,
            cond_ceiling=None):
    """Recover the minimum-norm spectrum consistent with ``lags``.

    Args:
        lags: CovarianceLags (or raw complex vector) of length cfg.M.
        residual_tol: Feasibility tolerance, scaled by (1 + max |r_m|). A
            FeasibilityWarning is emitted when the quadrature-checked
            constraint residual exceeds it.
        residual_nodes: Node count for the residual check; default scales
            with the top basis frequency.
        cond_ceiling: Optional override of the Gram conditioning ceiling.

    Raises:
        ConditioningError: Propagated from Gram assembly.
    """
    if not isinstance(lags, CovarianceLags):
        lags = CovarianceLags(lags)
    if lags.M != cfg.M:
        raise ValueError(f"lag count {lags.M} does not match array M = {cfg.M}")
    gram = assemble_gram(cfg) if cond_ceiling is None else assemble_gram(cfg, cond_ceiling)
    coeffs = solve(gram, measurement_vector(lags))

    nodes = residual_nodes if residual_nodes is not None else _auto_nodes(cfg)
    residual = float(np.max(np.abs(_lags_of_coeffs(cfg, coeffs, nodes) - lags.r)))
    scale = residual_tol * (1.0 + float(np.max(np.abs(lags.r))))
    if residual > scale:
        warnings.warn(
            f"constraint residual {residual:.3e} exceeds tolerance {scale:.3e}; "
            "the Gram solve is numerically unreliable at this configuration",
            FeasibilityWarning,
            stacklevel=2,
        )
    return PlvSolution(coeffs, residual, cfg)


def recover_from_matrix(matrix, cfg, tol=1e-10, **kwargs):
    """Recover from a full covariance matrix, validating its Hermitian
    Toeplitz structure first.

    Raises:
        StructureError: If the matrix is not Hermitian Toeplitz within
            ``tol`` (then it cannot come from a uniform linear array).
    """
    lags = lags_from_toeplitz(matrix, tol)
    if lags.M != cfg.M:
        raise ValueError(f"matrix size {lags.M} does not match array M = {cfg.M}")
    return recover(lags, cfg, **kwargs)


def project_onto_nperp(g, cfg, rule=None):
    """Project a function (or an L2 spectrum model) orthogonally onto the
    trigonometric subspace spanned by the array's basis.

    The projection coefficients solve G c = v with v the vector of
    weighted moments of ``g`` against the basis. For a density synthesized
    into lags this coincides with :func:`recover`, which is the identity
    the test suite checks.

    Args:
        g: Vectorized callable on [-1, 1], or an ApsModel with a density
            (models integrate seam-aware).
        rule: Chebyshev-Gauss rule for the moments; defaults to 512 nodes.
    """
    if rule is not None and rule.kind != CHEBYSHEV_GAUSS:
        raise ValueError("projection moments require a Chebyshev-Gauss rule")
    nodes = rule.nodes if rule is not None else 512
    if isinstance(g, ApsModel):
        points, weights = weighted_quadrature_points(nodes, seams_x(g))
        samples = transform_aps(g)(points)
    else:
        moment_rule = rule if rule is not None else chebyshev_gauss(nodes)
        points, weights = moment_rule.abscissae, moment_rule.weights
        samples = np.asarray(g(points), dtype=np.float64)
    moments = trig_basis(cfg, points).T @ (weights * samples)
    return solve(assemble_gram(cfg), moments)


def evaluate_solution(solution, grid, domain=Domain.THETA):
    """Sample the reconstruction on a grid in either domain.

    Raises:
        DomainError: If the grid leaves [-pi/2, pi/2] (theta) or [-1, 1] (x).
    """
    domain = Domain(domain)
    grid = np.asarray(grid, dtype=np.float64)
    if domain is Domain.THETA:
        if np.any(np.abs(grid) > HALF_PI):
            raise DomainError("theta grid must lie within [-pi/2, pi/2]")
        values = solution.rho(grid)
    else:
        if np.any(np.abs(grid) > 1.0):
            raise DomainError("x grid must lie within [-1, 1]")
        values = solution.g(grid)
    return SampledFunction(grid, values, domain)


class NegativitySummary(NamedTuple):
    min_value: float
    negative_fraction: float


def negativity_summary(solution, nodes=2048):
    """Diagnostics for sign violations of a reconstruction: the minimum
    value over a dense x grid, and the weighted mass of the negative part
    relative to the total absolute mass (0 for a nonnegative solution)."""
    points, weights = weighted_quadrature_points(nodes)
    values = solution.g(points)
    grid_min = float(np.min(values))
    abs_mass = float(np.sum(weights * np.abs(values)))
    if abs_mass == 0.0:
        return NegativitySummary(grid_min, 0.0)
    neg_mass = float(np.sum(weights * np.maximum(-values, 0.0)))
    return NegativitySummary(grid_min, neg_mass / abs_mass)

"""Forward model: synthesize covariance lags (and the full covariance
matrix) from a ground-truth spectrum model.

The m-th lag is the integral of rho(theta) e^{i kappa_m sin(theta)} over
the angle interval; equivalently, after x = sin(theta), the weighted
Fourier measurement of the transformed density. Both integration paths
are available and must agree, which is the cross-check the test suite
leans on. Point sources never touch quadrature: their lags are exact
finite sums of complex exponentials.
"""

from dataclasses import dataclass

import numpy as np

from .core import (
    ApsModel,
    CovarianceLags,
    Domain,
    PointSources,
    SpectrumSum,
    seams_x,
    toeplitz_from_lags,
    transform_aps,
)
from .quad import theta_quadrature_points, weighted_quadrature_points

DEFAULT_NODES = 256


@dataclass(frozen=True)
class SynthesisOptions:
    """Quadrature resolution and integration path for lag synthesis."""

    nodes: int = DEFAULT_NODES
    domain_path: Domain = Domain.THETA

    def __post_init__(self):
        if self.nodes < 16:
            raise ValueError("synthesis needs at least 16 quadrature nodes")
        object.__setattr__(self, "domain_path", Domain(self.domain_path))


def _split_atoms(model):
    """Separate Dirac sources from density terms, recursing through sums."""
    if isinstance(model, PointSources):
        return list(model.sources), []
    if isinstance(model, SpectrumSum):
        atoms, densities = [], []
        for term in model.terms:
            sub_atoms, sub_densities = _split_atoms(term)
            atoms.extend(sub_atoms)
            densities.extend(sub_densities)
        return atoms, densities
    return [], [model]


def synthesize_lags(model, cfg, opts=None):
    """Covariance lags r_m, m = 0..M-1, of ``model`` under ``cfg``.

    The imaginary part of r_0 is forced to exact zero (it vanishes
    analytically). Sums are synthesized term by term in declaration
    order, so results are deterministic and linear in the model.
    """
    if not isinstance(model, ApsModel):
        raise TypeError("model must be a spectrum model")
    opts = opts if opts is not None else SynthesisOptions()
    kappas = cfg.kappas(cfg.M)
    r = np.zeros(cfg.M, dtype=np.complex128)

    atoms, densities = _split_atoms(model)
    for angle, power in atoms:
        r += power * np.exp(1j * kappas * np.sin(angle))

    if densities:
        density = densities[0] if len(densities) == 1 else SpectrumSum(tuple(densities))
        if opts.domain_path is Domain.THETA:
            points, weights = theta_quadrature_points(opts.nodes, density.seams_theta())
            samples = weights * density.rho(points)
            r += np.exp(1j * np.multiply.outer(kappas, np.sin(points))) @ samples
        else:
            g = transform_aps(density)
            points, weights = weighted_quadrature_points(opts.nodes, seams_x(density))
            samples = weights * g(points)
            r += np.exp(1j * np.multiply.outer(kappas, points)) @ samples

    r[0] = r[0].real
    return CovarianceLags(r)


def synthesize_covariance(model, cfg, opts=None):
    """Full M-by-M Hermitian Toeplitz covariance of ``model``; positive
    semidefinite up to quadrature error for any nonnegative spectrum."""
    return toeplitz_from_lags(synthesize_lags(model, cfg, opts))

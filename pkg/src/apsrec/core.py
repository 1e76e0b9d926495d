"""Domain types shared by all modules: array geometry, covariance lags,
trigonometric coefficient vectors, spectrum models, and the conversions
between the angle domain theta in [-pi/2, pi/2] and the transformed
domain x = sin(theta) in [-1, 1].

All types are immutable after construction and safe to share across
threads; no operation mutates its inputs.
"""

import abc
import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, ModelError, StructureError

HALF_PI = 0.5 * np.pi


class Domain(str, enum.Enum):
    """Which variable a grid or integration path lives in."""

    THETA = "theta"
    X = "x"


def _readonly(obj, name, arr):
    arr.setflags(write=False)
    object.__setattr__(obj, name, arr)


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform linear array geometry.

    Args:
        M: Antenna count, at least 1.
        gamma: Dimensionless spacing ratio 2*d/wavelength, positive. The
            spatial frequency of the m-th lag is ``kappa(m) = gamma*pi*m``.

    Values gamma > 1 (spatially aliased arrays) are accepted; the
    recovery machinery is agnostic to aliasing and simply works with the
    resulting frequencies.
    """

    M: int
    gamma: float = 1.0

    def __post_init__(self):
        if not isinstance(self.M, (int, np.integer)) or isinstance(self.M, bool):
            raise ValueError("M must be an integer")
        if self.M < 1:
            raise ValueError("M must be at least 1")
        object.__setattr__(self, "M", int(self.M))
        gamma = float(self.gamma)
        if not np.isfinite(gamma) or gamma <= 0.0:
            raise ValueError("gamma must be positive and finite")
        object.__setattr__(self, "gamma", gamma)

    def kappa(self, m):
        """Spatial frequency gamma*pi*m for a nonnegative integer index m.

        The index may exceed M-1: the Gram matrix needs frequencies up to
        index 2M-2.
        """
        if m < 0:
            raise ValueError("kappa is defined for nonnegative indices")
        return self.gamma * np.pi * m

    def kappas(self, count):
        """Vector of the first ``count`` spatial frequencies gamma*pi*[0..count-1]."""
        return self.gamma * np.pi * np.arange(count)

    @property
    def n_coeffs(self):
        """Dimension 2M-1 of the trigonometric coefficient space."""
        return 2 * self.M - 1


@dataclass(frozen=True)
class CovarianceLags:
    """First column r of a Hermitian Toeplitz ULA covariance matrix.

    ``r[0]`` must have exactly zero imaginary part (it is the integral of a
    real nonnegative density). Negative lags are implied by conjugate
    symmetry ``r[-m] = conj(r[m])`` and are never stored.
    """

    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=np.complex128, copy=True).reshape(-1)
        if r.size < 1:
            raise ValueError("lag vector must have at least one entry")
        if not np.all(np.isfinite(r)):
            raise ValueError("lag vector must be finite")
        if r[0].imag != 0.0:
            raise ValueError("imaginary part of r[0] must be exactly zero")
        _readonly(self, "r", r)

    @property
    def M(self):
        return self.r.size

    def __len__(self):
        return self.r.size


@dataclass(frozen=True)
class TrigCoeffs:
    """Real coefficient vector of a trigonometric polynomial on [-1, 1].

    Layout: ``b[0]`` is the constant term, ``b[1..M-1]`` are the cosine
    coefficients of cos(kappa_m x), and ``b[M..2M-2]`` are the sine
    coefficients of sin(kappa_m x). This ordering is the wire format used
    by every solver and file in the package.
    """

    b: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=np.float64, copy=True).reshape(-1)
        if b.size % 2 == 0:
            raise ValueError("coefficient vector must have odd length 2M-1")
        if not np.all(np.isfinite(b)):
            raise ValueError("coefficients must be finite")
        _readonly(self, "b", b)

    @property
    def M(self):
        return (self.b.size + 1) // 2

    @property
    def constant(self):
        return self.b[0]

    @property
    def cos_block(self):
        """Coefficients of cos(kappa_m x) for m = 1..M-1 (empty when M = 1)."""
        return self.b[1:self.M]

    @property
    def sin_block(self):
        """Coefficients of sin(kappa_m x) for m = 1..M-1 (empty when M = 1)."""
        return self.b[self.M:]

    def __len__(self):
        return self.b.size

    @classmethod
    def zeros(cls, M):
        return cls(np.zeros(2 * M - 1))


def trig_basis(cfg, x):
    """Evaluate the basis [1, cos(kappa_1 x)..cos(kappa_{M-1} x),
    sin(kappa_1 x)..sin(kappa_{M-1} x)] at the points ``x``.

    Returns:
        Array of shape (len(x), 2M-1); one row per evaluation point.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    freqs = cfg.kappas(cfg.M)[1:]
    arg = np.multiply.outer(x, freqs)
    return np.concatenate(
        [np.ones((x.size, 1)), np.cos(arg), np.sin(arg)], axis=1
    )


def evaluate_trig(cfg, coeffs, x):
    """Evaluate the trigonometric polynomial with coefficients ``coeffs``
    (a TrigCoeffs or a raw length-2M-1 vector) at scalar or vector ``x``.

    Evaluation is meaningful for |x| <= 1; values outside are analytic
    continuation and are returned without error.
    """
    b = coeffs.b if isinstance(coeffs, TrigCoeffs) else np.asarray(coeffs, dtype=np.float64)
    if b.size != cfg.n_coeffs:
        raise ValueError(
            f"coefficient length {b.size} does not match 2M-1 = {cfg.n_coeffs}"
        )
    values = trig_basis(cfg, x) @ b
    return values[0] if np.isscalar(x) or np.ndim(x) == 0 else values


class ApsModel(abc.ABC):
    """Parametric ground-truth angular power spectrum on [-pi/2, pi/2].

    Concrete models either have a square-integrable density (``in_l2`` is
    True) or are purely atomic (point sources), in which case the density
    does not exist and only exact lag synthesis applies.
    """

    @property
    @abc.abstractmethod
    def in_l2(self):
        """True when the model has an L2 density, so energy identities apply."""

    @abc.abstractmethod
    def rho(self, theta):
        """Power density at angle(s) ``theta`` in radians."""

    def seams_theta(self):
        """Interior angles where the density is not smooth (kinks or jumps).

        Quadrature engines split integration at these points; smooth models
        return an empty tuple.
        """
        return ()

    def __add__(self, other):
        if not isinstance(other, ApsModel):
            return NotImplemented
        return SpectrumSum((self, other))


def _check_angle(name, value):
    if not (-HALF_PI <= value <= HALF_PI):
        raise ValueError(f"{name} must lie in [-pi/2, pi/2]")


@dataclass(frozen=True)
class Uniform(ApsModel):
    """Constant power density ``height`` on the angular segment [lo, hi]."""

    lo: float
    hi: float
    height: float

    def __post_init__(self):
        _check_angle("lo", self.lo)
        _check_angle("hi", self.hi)
        if self.hi <= self.lo:
            raise ValueError("hi must exceed lo")
        if not (self.height >= 0.0):
            raise ValueError("height must be nonnegative")

    @property
    def in_l2(self):
        return True

    def rho(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        return np.where((theta >= self.lo) & (theta <= self.hi), self.height, 0.0)

    def seams_theta(self):
        return tuple(p for p in (self.lo, self.hi) if -HALF_PI < p < HALF_PI)


def _check_components(components):
    out = []
    for comp in components:
        mean, std, weight = comp
        _check_angle("component mean", mean)
        if not (std > 0.0):
            raise ValueError("component std must be positive")
        if not (weight >= 0.0):
            raise ValueError("component weight must be nonnegative")
        out.append((float(mean), float(std), float(weight)))
    if not out:
        raise ValueError("mixture needs at least one component")
    return tuple(out)


@dataclass(frozen=True)
class GaussianMixture(ApsModel):
    """Sum of Gaussian bells, each (mean, std, weight), hard-truncated to
    [-pi/2, pi/2] with no renormalization: the effective spectrum is the
    truncated one."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", _check_components(self.components))

    @property
    def in_l2(self):
        return True

    def rho(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        total = np.zeros_like(theta)
        for mean, std, weight in self.components:
            z = (theta - mean) / std
            total = total + weight * np.exp(-0.5 * z * z) / (std * np.sqrt(2.0 * np.pi))
        return total


@dataclass(frozen=True)
class LaplacianMixture(ApsModel):
    """Sum of Laplacian peaks, each (mean, std, weight), truncated to
    [-pi/2, pi/2]. ``std`` is the standard deviation; the Laplace scale is
    std/sqrt(2). The density has a kink at each mean."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", _check_components(self.components))

    @property
    def in_l2(self):
        return True

    def rho(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        total = np.zeros_like(theta)
        for mean, std, weight in self.components:
            scale = std / np.sqrt(2.0)
            total = total + weight * np.exp(-np.abs(theta - mean) / scale) / (2.0 * scale)
        return total

    def seams_theta(self):
        return tuple(
            mean for mean, _, _ in self.components if -HALF_PI < mean < HALF_PI
        )


@dataclass(frozen=True)
class TrigPolynomial(ApsModel):
    """Spectrum whose transformed density g(x) is the trigonometric
    polynomial ``coeffs`` at the frequencies of ``config``; the angular
    density is rho(theta) = g(sin theta)."""

    config: ArrayConfig
    coeffs: TrigCoeffs

    def __post_init__(self):
        if self.coeffs.M != self.config.M:
            raise ValueError(
                f"coefficient order {self.coeffs.M} does not match array M = {self.config.M}"
            )

    @property
    def in_l2(self):
        return True

    def g(self, x):
        """Transformed density, evaluated natively in x."""
        return evaluate_trig(self.config, self.coeffs, x)

    def rho(self, theta):
        return self.g(np.sin(np.asarray(theta, dtype=np.float64)))


@dataclass(frozen=True)
class PointSources(ApsModel):
    """Discrete sources, each (angle, power). Dirac masses are not
    square-integrable, so this model has no density and no transform; its
    lags are exact finite sums."""

    sources: tuple

    def __post_init__(self):
        out = []
        for angle, power in self.sources:
            _check_angle("source angle", angle)
            if not (power >= 0.0):
                raise ValueError("source power must be nonnegative")
            out.append((float(angle), float(power)))
        if not out:
            raise ValueError("need at least one source")
        object.__setattr__(self, "sources", tuple(out))

    @property
    def in_l2(self):
        return False

    def rho(self, theta):
        raise ModelError("point sources have no pointwise density")


@dataclass(frozen=True)
class SpectrumSum(ApsModel):
    """Superposition of spectrum models."""

    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("sum needs at least one term")
        for term in terms:
            if not isinstance(term, ApsModel):
                raise TypeError("sum terms must be spectrum models")
        object.__setattr__(self, "terms", terms)

    @property
    def in_l2(self):
        return all(term.in_l2 for term in self.terms)

    def rho(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        total = np.zeros_like(theta)
        for term in self.terms:
            total = total + term.rho(theta)
        return total

    def seams_theta(self):
        seams = set()
        for term in self.terms:
            seams.update(term.seams_theta())
        return tuple(sorted(seams))


def transform_aps(model):
    """Return the transformed density g(x) = rho(arcsin x) on [-1, 1].

    Args:
        model: An L2 spectrum model. Point sources never pass through
            g-space and raise ModelError.

    Returns:
        A vectorized callable g(x). Evaluation outside [-1, 1] raises
        DomainError.
    """
    if not model.in_l2:
        raise ModelError(
            "model has no square-integrable density; its transform is undefined"
        )

    if isinstance(model, TrigPolynomial):
        native = model.g
    else:
        def native(x):
            return model.rho(np.arcsin(x))

    def g(x):
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < -1.0) or np.any(x > 1.0):
            raise DomainError("transformed density is defined on [-1, 1]")
        return native(x)

    return g


def seams_x(model):
    """The model's non-smooth points mapped to the x domain."""
    return tuple(np.sin(t) for t in model.seams_theta())


def toeplitz_from_lags(lags):
    """Build the full M-by-M Hermitian Toeplitz covariance matrix whose
    first column is ``lags.r``."""
    return scipy.linalg.toeplitz(lags.r, np.conj(lags.r))


def lags_from_toeplitz(matrix, tol=1e-10):
    """Extract the first column of a Hermitian Toeplitz matrix as lags.

    Args:
        matrix: Square complex matrix.
        tol: Maximum entrywise deviation from exact Hermitian Toeplitz
            structure before the input is rejected.

    Raises:
        StructureError: If ``matrix`` deviates from Hermitian Toeplitz
            structure by more than ``tol`` (it then cannot be a ULA
            covariance).
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise StructureError("covariance must be a square matrix")
    first = matrix[:, 0].copy()
    first[0] = first[0].real
    lags = CovarianceLags(first)
    deviation = np.max(np.abs(matrix - toeplitz_from_lags(lags)))
    if deviation > tol:
        raise StructureError(
            f"matrix deviates from Hermitian Toeplitz structure by {deviation:.3e} (tol {tol:.3e})"
        )
    return lags


@dataclass(frozen=True)
class SampledFunction:
    """A function sampled on a strictly increasing grid, tagged with the
    domain (theta or x) the grid lives in. Plain container for CSV output
    and plotting."""

    grid: np.ndarray
    values: np.ndarray
    domain: Domain = Domain.X

    def __post_init__(self):
        grid = np.array(self.grid, dtype=np.float64, copy=True).reshape(-1)
        values = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if grid.size != values.size:
            raise ValueError("grid and values must have equal length")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        _readonly(self, "grid", grid)
        _readonly(self, "values", values)
        object.__setattr__(self, "domain", Domain(self.domain))

    def __len__(self):
        return self.grid.size

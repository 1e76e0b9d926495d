"""The block-diagonal Gram matrix of the trigonometric basis under the
weighted inner product, in closed form via J0, plus its Cholesky
factorization and the linear solve that yields recovery coefficients.

The basis splits by parity: cosines (with the constant as index 0) pair
only with the real parts of the lags, sines only with the imaginary
parts, so the full (2M-1)-dimensional system decouples into two
independent symmetric positive-definite blocks.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import ArrayConfig, CovarianceLags, TrigCoeffs
from .errors import ConditioningError
from .specfun import bessel_j0

DEFAULT_COND_CEILING = 1e12


def gram_blocks(cfg):
    """Closed-form Gram blocks for the array configuration.

    Returns:
        (g_re, g_im): the M-by-M cosine-block matrix with entries
        (pi/2)(J0(kappa_|m-n|) + J0(kappa_{m+n})) and the (M-1)-by-(M-1)
        sine-block matrix with entries
        (pi/2)(J0(kappa_|m-n|) - J0(kappa_{m+n})). Assembles entries only;
        no factorization, so this never raises on ill conditioning.
    """
    idx = np.arange(cfg.M)
    diff = cfg.gamma * np.pi * np.abs(idx[:, None] - idx[None, :])
    total = cfg.gamma * np.pi * (idx[:, None] + idx[None, :])
    g_re = (np.pi / 2.0) * (bessel_j0(diff) + bessel_j0(total))
    if cfg.M > 1:
        g_im = (np.pi / 2.0) * (bessel_j0(diff[1:, 1:]) - bessel_j0(total[1:, 1:]))
    else:
        g_im = np.zeros((0, 0))
    return g_re, g_im


@dataclass(frozen=True)
class GramMatrix:
    """Assembled and factorized Gram matrix for one array configuration.

    ``chol_re`` and ``chol_im`` are lower-triangular Cholesky factors;
    ``cond_estimate`` is the 1-norm condition number of the full
    block-diagonal matrix. Immutable; concurrent solves against one
    factorization are safe.
    """

    cfg: ArrayConfig
    g_re: np.ndarray
    g_im: np.ndarray
    chol_re: np.ndarray
    chol_im: np.ndarray
    cond_estimate: float

    @property
    def size(self):
        return 2 * self.cfg.M - 1

    def full_matrix(self):
        """The dense (2M-1)-by-(2M-1) block-diagonal matrix."""
        M = self.cfg.M
        full = np.zeros((self.size, self.size))
        full[:M, :M] = self.g_re
        full[M:, M:] = self.g_im
        return full

    def quadratic_form(self, b):
        """b^T G b for a TrigCoeffs or raw coefficient vector."""
        b = b.b if isinstance(b, TrigCoeffs) else np.asarray(b, dtype=np.float64)
        M = self.cfg.M
        return float(b[:M] @ self.g_re @ b[:M] + b[M:] @ self.g_im @ b[M:])


def _one_norm_cond(block, factor):
    if block.shape[0] == 0:
        return 1.0, 1.0
    inverse = scipy.linalg.cho_solve((factor, True), np.eye(block.shape[0]))
    return np.linalg.norm(block, 1), np.linalg.norm(inverse, 1)


def assemble_gram(cfg, cond_ceiling=DEFAULT_COND_CEILING):
    """Assemble and factorize the Gram matrix for ``cfg``.

    Args:
        cfg: Array configuration.
        cond_ceiling: Hard ceiling on the 1-norm condition estimate. The
            matrix is positive definite in exact arithmetic for every
            M and gamma, but closely spaced frequencies (gamma << 1) make
            it numerically singular; past the ceiling the closed-form
            solve is meaningless and we fail loudly rather than
            regularize.

    Raises:
        ConditioningError: If a Cholesky factorization fails or the
            condition estimate exceeds ``cond_ceiling``.
    """
    g_re, g_im = gram_blocks(cfg)
    try:
        chol_re = scipy.linalg.cholesky(g_re, lower=True)
        chol_im = (
            scipy.linalg.cholesky(g_im, lower=True) if cfg.M > 1 else np.zeros((0, 0))
        )
    except scipy.linalg.LinAlgError as exc:
        raise ConditioningError(
            f"Gram factorization failed for M={cfg.M}, gamma={cfg.gamma:g}: "
            f"matrix is numerically indefinite ({exc})"
        ) from exc
    norm_re, inv_re = _one_norm_cond(g_re, chol_re)
    norm_im, inv_im = _one_norm_cond(g_im, chol_im)
    cond = max(norm_re, norm_im) * max(inv_re, inv_im)
    if cond > cond_ceiling:
        raise ConditioningError(
            f"Gram condition estimate {cond:.3e} exceeds ceiling {cond_ceiling:.3e} "
            f"for M={cfg.M}, gamma={cfg.gamma:g}",
            cond_estimate=cond,
        )
    return GramMatrix(cfg, g_re, g_im, chol_re, chol_im, float(cond))


@dataclass(frozen=True)
class MeasurementVector:
    """Stacked real measurements [Re r_0 .. Re r_{M-1}, Im r_1 .. Im r_{M-1}]."""

    y: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=np.float64, copy=True).reshape(-1)
        if y.size % 2 == 0:
            raise ValueError("measurement vector must have odd length 2M-1")
        if not np.all(np.isfinite(y)):
            raise ValueError("measurements must be finite")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    @property
    def M(self):
        return (self.y.size + 1) // 2

    def __len__(self):
        return self.y.size


def measurement_vector(lags):
    """Stack the real and imaginary lag parts into the solver layout."""
    if not isinstance(lags, CovarianceLags):
        lags = CovarianceLags(lags)
    return MeasurementVector(np.concatenate([lags.r.real, lags.r[1:].imag]))


def solve(gram, y):
    """Solve G b = y blockwise from the Cholesky factors.

    One step of iterative refinement follows each triangular solve, so the
    residual stays at the backward-stable floor. Returns TrigCoeffs in the
    [constant | cosine | sine] layout.
    """
    y_arr = y.y if isinstance(y, MeasurementVector) else MeasurementVector(y).y
    if y_arr.size != gram.size:
        raise ValueError(
            f"measurement length {y_arr.size} does not match Gram size {gram.size}"
        )
    M = gram.cfg.M

    def refine(block, factor, rhs):
        if rhs.size == 0:
            return rhs.copy()
        sol = scipy.linalg.cho_solve((factor, True), rhs)
        sol += scipy.linalg.cho_solve((factor, True), rhs - block @ sol)
        return sol

    cos_part = refine(gram.g_re, gram.chol_re, y_arr[:M])
    sin_part = refine(gram.g_im, gram.chol_im, y_arr[M:])
    return TrigCoeffs(np.concatenate([cos_part, sin_part]))

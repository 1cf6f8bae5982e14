# File: lorec/matrix_core.py
# Dense symmetric matrices: validation, norms, spectral factorizations and the
# thresholding operators the solver and estimators are built from.
#
# A "SymmetricMatrix" is a plain float64 numpy array that is EXACTLY symmetric.
# Every function here that reconstructs a matrix from a spectral factorization
# passes it through `symmetrize` so floating-point drift never breaks that.

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from lorec.utils.errors import (
    InvalidInputError, NumericFailureError, SingularMatrixError,
)

logger = logging.getLogger(__name__)

SymmetricMatrix = NDArray[np.float64]

# Relative tolerance used when validating user-supplied "symmetric" input.
SYMMETRY_RTOL = 1e-8
# Eigenvalue ratio below which a matrix is treated as singular.
SINGULAR_RATIO = 1e-12


def symmetrize(m):
    """(M + Mᵀ)/2. The result is exactly symmetric (float addition commutes)."""
    m = np.asarray(m, dtype=np.float64)
    return (m + m.T) / 2.0


def as_symmetric(m, name='matrix'):
    """Validate a square, symmetric-within-tolerance matrix; return it symmetrized.

    Raises InvalidInputError for non-square, empty, non-finite or clearly
    asymmetric input.
    """
    a = np.array(m, dtype=np.float64)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInputError(f'{name} must be a non-empty square matrix, got shape {a.shape}')
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f'{name} contains NaN or infinite entries')
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > SYMMETRY_RTOL * scale:
        raise InvalidInputError(f'{name} is not symmetric')
    return symmetrize(a)


def _check_tau(tau):
    if tau < 0:
        raise InvalidInputError(f'threshold must be nonnegative, got {tau}')


def _is_symmetric(m):
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.array_equal(m, m.T)


# ── estimators of second moments ─────────────────────────────────────────────
def sample_covariance(data):
    """Unbiased sample covariance (divisor n−1) of an n×p observation matrix."""
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2:
        raise InvalidInputError(f'data must be an n×p matrix, got {x.ndim} dimensions')
    n = x.shape[0]
    if n < 2:
        raise InvalidInputError(f'sample covariance needs at least 2 observations, got {n}')
    if not np.all(np.isfinite(x)):
        raise InvalidInputError('data contains NaN or infinite entries')
    centered = x - x.mean(axis=0)
    return symmetrize(centered.T @ centered / (n - 1))


# ── thresholding operators ───────────────────────────────────────────────────
def soft_threshold_entrywise(m, tau):
    """sign(m)·max(|m| − τ, 0) applied to every entry."""
    _check_tau(tau)
    m = np.asarray(m, dtype=np.float64)
    return np.sign(m) * np.maximum(np.abs(m) - tau, 0.0)


def hard_threshold(m, tau):
    """Keep entries with |m| ≥ τ (inclusive), zero the rest."""
    _check_tau(tau)
    m = np.asarray(m, dtype=np.float64)
    return np.where(np.abs(m) >= tau, m, 0.0)


def hard_threshold_penalty(x, rho):
    """Elementwise hard-thresholding penalty pen_ρ(x) = (ρ² − (|x|−ρ)²·1{|x|<ρ})/2.

    Its proximal map under the ½-squared loss is `hard_threshold(·, ρ)`.
    """
    _check_tau(rho)
    x = np.abs(np.asarray(x, dtype=np.float64))
    return 0.5 * (rho ** 2 - np.where(x < rho, (x - rho) ** 2, 0.0))


def _numerical_rank(values):
    """Count of entries above numpy's matrix_rank tolerance."""
    values = np.abs(values)
    if values.size == 0 or values.max() == 0.0:
        return 0
    tol = values.max() * values.size * np.finfo(np.float64).eps
    return int(np.count_nonzero(values > tol))


def svd_soft_threshold(m, tau):
    """Soft-threshold the singular values of M by τ.

    Returns (U·diag(T_τ(D))·Vᵀ, rank). Symmetric input goes through the
    symmetric eigensolver: singular values are |Λ| with the sign folded into
    the left vectors, and the output is exactly symmetric.
    """
    _check_tau(tau)
    m = np.asarray(m, dtype=np.float64)
    if _is_symmetric(m):
        fac = spectral_factorize(m)
        shrunk = np.maximum(np.abs(fac.eigenvalues) - tau, 0.0)
        signed = np.sign(fac.eigenvalues) * shrunk
        out = (fac.eigenvectors * signed) @ fac.eigenvectors.T
        return symmetrize(out), _numerical_rank(shrunk)
    try:
        u, d, vt = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericFailureError(f'SVD did not converge: {exc}') from exc
    shrunk = np.maximum(d - tau, 0.0)
    return (u * shrunk) @ vt, _numerical_rank(shrunk)


# ── norms ────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class MatrixNorms:
    operator: float
    frobenius: float
    max: float
    elementwise_l1: float
    nuclear: float
    matrix_l1: float


def singular_values(m):
    m = np.asarray(m, dtype=np.float64)
    if _is_symmetric(m):
        return np.sort(np.abs(scipy.linalg.eigvalsh(m)))[::-1]
    return np.linalg.svd(m, compute_uv=False)


def norms(m):
    """All matrix norms used in the package, in one pass over the spectrum."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise InvalidInputError(f'norms expects a matrix, got {m.ndim} dimensions')
    sv = singular_values(m)
    a = np.abs(m)
    return MatrixNorms(
        operator=float(sv[0]) if sv.size else 0.0,
        frobenius=float(np.linalg.norm(m, 'fro')),
        max=float(a.max()) if a.size else 0.0,
        elementwise_l1=float(a.sum()),
        nuclear=float(sv.sum()),
        matrix_l1=float(a.sum(axis=0).max()) if a.size else 0.0,
    )


def frobenius(m):
    return float(np.linalg.norm(m, 'fro'))


def operator_norm(m):
    sv = singular_values(m)
    return float(sv[0]) if sv.size else 0.0


def nuclear_norm(m):
    return float(singular_values(m).sum())


# ── spectral factorizations ──────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class SpectralFactorization:
    """M = V·diag(Λ)·Vᵀ with Λ descending and orthonormal columns V."""
    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]

    def reconstruct(self):
        return symmetrize((self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T)


def _fix_signs(vectors):
    """Flip each column so its first nonzero coordinate is positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            out[:, j] = -col
    return out


def spectral_factorize(m):
    """Symmetric eigendecomposition, eigenvalues descending, deterministic signs."""
    m = np.asarray(m, dtype=np.float64)
    try:
        values, vectors = scipy.linalg.eigh(m)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericFailureError(f'symmetric eigensolver did not converge: {exc}') from exc
    order = np.argsort(values, kind='stable')[::-1]
    return SpectralFactorization(values[order], _fix_signs(vectors[:, order]))


def invert_spd(m):
    """Inverse of a symmetric positive definite matrix.

    Raises SingularMatrixError when the smallest eigenvalue is not above
    1e-12 times the largest (this also rejects indefinite input).
    """
    fac = spectral_factorize(as_symmetric(m))
    top, bottom = fac.eigenvalues[0], fac.eigenvalues[-1]
    if top <= 0 or bottom <= SINGULAR_RATIO * top:
        raise SingularMatrixError(
            f'matrix is not safely positive definite: smallest eigenvalue {bottom:.6g} '
            f'(largest {top:.6g})',
            eigenvalue=float(bottom),
        )
    inv = (fac.eigenvectors / fac.eigenvalues) @ fac.eigenvectors.T
    return symmetrize(inv)


def invert_symmetric(m):
    """Inverse of a nonsingular symmetric matrix, definite or not."""
    fac = spectral_factorize(as_symmetric(m))
    mags = np.abs(fac.eigenvalues)
    idx = int(np.argmin(mags))
    if mags.max() == 0 or mags[idx] <= SINGULAR_RATIO * mags.max():
        raise SingularMatrixError(
            f'matrix is singular: eigenvalue {fac.eigenvalues[idx]:.6g} '
            f'(largest magnitude {mags.max():.6g})',
            eigenvalue=float(fac.eigenvalues[idx]),
        )
    inv = (fac.eigenvectors / fac.eigenvalues) @ fac.eigenvectors.T
    return symmetrize(inv)

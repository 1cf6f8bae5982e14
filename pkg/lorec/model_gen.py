# File: lorec/model_gen.py
# Ground-truth covariance models for the simulation study, and Gaussian
# sampling from them. Every generator is a pure function of (p, seed).

import logging
from dataclasses import dataclass, field

import numpy as np

from lorec import matrix_core as mc
from lorec.utils import make_rng
from lorec.utils.errors import InvalidInputError, NumericFailureError

logger = logging.getLogger(__name__)

FAMILIES = ('factor', 'compound_symmetry', 'spike')

FACTOR_RANK = 3
FACTOR_STRENGTH = 8.0
CS_BLOCK = 5
CS_COMMON = 0.2
CS_WITHIN = 0.4
SPIKE_BETA = 16.0
SPIKE_BLOCK = 4
SPIKE_WITHIN = 0.4


@dataclass(frozen=True, eq=False)
class GroundTruthModel:
    """Σ* = L* + S* (exactly: sigma is computed as the sum)."""
    low_rank: np.ndarray
    sparse: np.ndarray
    family: str
    family_params: dict = field(default_factory=dict)
    true_rank: int = 0

    @property
    def sigma(self):
        return self.low_rank + self.sparse

    @property
    def dim(self):
        return self.low_rank.shape[0]

    @property
    def true_support(self):
        rows, cols = np.nonzero(self.sparse)
        return frozenset(zip(rows.tolist(), cols.tolist()))

    def meta(self):
        """JSON-friendly description (everything except the matrices)."""
        return {
            'family': self.family,
            'p': self.dim,
            'true_rank': self.true_rank,
            'support_size': len(self.true_support),
            'family_params': self.family_params,
        }


def _block_diagonal(p, block):
    return np.kron(np.eye(p // block.shape[0]), block)


def haar_orthonormal(p, k, rng):
    """p×k matrix with Haar-distributed orthonormal columns (QR of a Gaussian,
    with R's diagonal forced positive)."""
    q, r = np.linalg.qr(rng.standard_normal((p, k)))
    return q * np.sign(np.diag(r))


def gen_factor(p, seed):
    """Σ* = U·diag(8,8,8)·Uᵀ + I with Haar-uniform U ∈ ℝ^{p×3}."""
    if p < FACTOR_RANK + 1:
        raise InvalidInputError(f'factor model needs p >= {FACTOR_RANK + 1}, got {p}')
    rng = make_rng(seed)
    u = haar_orthonormal(p, FACTOR_RANK, rng)
    low_rank = mc.symmetrize((u * FACTOR_STRENGTH) @ u.T)
    return GroundTruthModel(
        low_rank=low_rank,
        sparse=np.eye(p),
        family='factor',
        family_params={'strength': FACTOR_STRENGTH, 'factors': FACTOR_RANK},
        true_rank=FACTOR_RANK,
    )


def gen_compound_symmetry(p, seed):
    """0.2·11ᵀ plus a randomly permuted block diagonal of 0.4·11ᵀ + 0.4·I blocks of size 5."""
    if p < CS_BLOCK or p % CS_BLOCK:
        raise InvalidInputError(f'compound symmetry needs p divisible by {CS_BLOCK}, got {p}')
    rng = make_rng(seed)
    block = CS_WITHIN * np.ones((CS_BLOCK, CS_BLOCK)) + CS_WITHIN * np.eye(CS_BLOCK)
    perm = rng.permutation(p)
    sparse = _block_diagonal(p, block)[np.ix_(perm, perm)]
    low_rank = CS_COMMON * np.ones((p, p))
    return GroundTruthModel(
        low_rank=low_rank,
        sparse=sparse,
        family='compound_symmetry',
        family_params={'block_size': CS_BLOCK, 'permutation': perm.tolist()},
        true_rank=1,
    )


def gen_spike(p, seed):
    """16·uuᵀ plus 4×4 blocks 0.4·11ᵀ + 0.6·I; u has p/2 entries ±1/√(p/2)."""
    if p < SPIKE_BLOCK or p % SPIKE_BLOCK or p % 2:
        raise InvalidInputError(f'spike model needs p divisible by {SPIKE_BLOCK}, got {p}')
    rng = make_rng(seed)
    k = p // 2
    support = np.sort(rng.choice(p, size=k, replace=False))
    signs = rng.choice(np.array([-1.0, 1.0]), size=k)
    u = np.zeros(p)
    u[support] = signs / np.sqrt(k)
    block = SPIKE_WITHIN * np.ones((SPIKE_BLOCK, SPIKE_BLOCK)) + (1 - SPIKE_WITHIN) * np.eye(SPIKE_BLOCK)
    return GroundTruthModel(
        low_rank=mc.symmetrize(SPIKE_BETA * np.outer(u, u)),
        sparse=_block_diagonal(p, block),
        family='spike',
        family_params={
            'beta': SPIKE_BETA, 'k': k, 's': SPIKE_BLOCK,
            'spike_support': support.tolist(), 'u': u.tolist(),
        },
        true_rank=1,
    )


GENERATORS = {
    'factor': gen_factor,
    'compound_symmetry': gen_compound_symmetry,
    'spike': gen_spike,
}


def generate(family, p, seed):
    generator = GENERATORS.get(family)
    if generator is None:
        raise InvalidInputError(f'unknown model family {family!r}; choose from {FAMILIES}')
    return generator(p, seed)


def spectral_sqrt(sigma):
    """Symmetric square root of a positive definite matrix."""
    fac = mc.spectral_factorize(sigma)
    if fac.eigenvalues[-1] <= 0:
        raise NumericFailureError(
            f'covariance is not positive definite (smallest eigenvalue {fac.eigenvalues[-1]:.6g})')
    return mc.symmetrize((fac.eigenvectors * np.sqrt(fac.eigenvalues)) @ fac.eigenvectors.T)


def sample_gaussian(model, n, seed):
    """n draws from N(0, Σ*) as an n×p matrix."""
    if n < 1:
        raise InvalidInputError(f'need at least one draw, got n={n}')
    sigma = model.sigma if isinstance(model, GroundTruthModel) else np.asarray(model, dtype=np.float64)
    root = spectral_sqrt(sigma)
    rng = make_rng(seed)
    return rng.standard_normal((n, sigma.shape[0])) @ root

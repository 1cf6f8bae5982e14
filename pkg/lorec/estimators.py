# File: lorec/estimators.py
# LOREC and the comparison baselines behind one interface:
#   estimate(spec, data) -> (Σ̂, Decomposition or None)
#
# Every kind is defined on a covariance input; `estimate` just feeds it the
# sample covariance of the data.

import logging

import numpy as np

from lorec import matrix_core as mc
from lorec.models import EstimatorSpec, SolverConfig
from lorec.solver import SUPPORT_CUTOFF, Decomposition, solve
from lorec.utils.errors import InvalidInputError, PreconditionError

logger = logging.getLogger(__name__)


def _as_spec(spec):
    if isinstance(spec, EstimatorSpec):
        return spec
    return EstimatorSpec.model_validate(spec)


def solver_config_for(spec, **options):
    """SolverConfig for a LOREC spec; `options` carries step_l/epsilon/max_iter/
    penalize_diagonal overrides (None values are ignored)."""
    extra = {k: v for k, v in options.items() if v is not None}
    return SolverConfig(lam=spec.params['lambda'], rho=spec.params['rho'], **extra)


def threshold_off_diagonal(sigma, tau):
    """Hard-threshold the off-diagonal entries; variances are never touched."""
    out = mc.hard_threshold(sigma, tau)
    np.fill_diagonal(out, np.diag(sigma))
    return out


def shrink_to_identity(sigma, w):
    """(1−w)·Σ + w·(tr Σ / p)·I. Trace-preserving for every w."""
    if not 0.0 <= w <= 1.0:
        raise InvalidInputError(f'shrinkage weight w must lie in [0, 1], got {w}')
    p = sigma.shape[0]
    target = (np.trace(sigma) / p) * np.eye(p)
    return mc.symmetrize((1.0 - w) * sigma + w * target)


def estimate_from_covariance(spec, sigma, init=None, **solver_options):
    """Apply the estimator to a covariance input. Returns (Σ̂, Decomposition | None).

    `init` warm-starts the solver for the two LOREC kinds; `solver_options` are
    passed to `solver_config_for`.
    """
    spec = _as_spec(spec)
    sigma = mc.as_symmetric(sigma, 'covariance input')
    kind, params = spec.kind, spec.params

    if kind == 'sample':
        return sigma, None
    if kind == 'hard_threshold':
        return threshold_off_diagonal(sigma, params['tau']), None
    if kind == 'shrink_to_identity':
        return shrink_to_identity(sigma, params['w']), None

    target = sigma
    if kind == 'lorec_thresholded_input':
        target = mc.hard_threshold(sigma, params['tau'])
    result = solve(target, solver_config_for(spec, **solver_options), init=init)
    decomposition = result.estimate
    return mc.symmetrize(decomposition.total), decomposition


def estimate(spec, data, **solver_options):
    """Fit the estimator on an n×p observation matrix."""
    return estimate_from_covariance(spec, mc.sample_covariance(data), **solver_options)


def spike_support_recovery(low_rank, k):
    """Support of the spike vector from a rank-one L̂.

    Thresholds ûûᵀ at 1/(2k), û being L̂'s leading eigenvector, and returns the
    rows with any surviving entry. ûûᵀ does not depend on the sign of û.
    """
    if k < 1:
        raise InvalidInputError(f'k must be at least 1, got {k}')
    low_rank = mc.as_symmetric(low_rank, 'low-rank part')
    rank = Decomposition(low_rank, np.zeros_like(low_rank)).rank
    if rank != 1:
        raise PreconditionError(
            f'support recovery needs a rank-one low-rank part, observed rank {rank} '
            f'(cutoff {SUPPORT_CUTOFF:g})')
    fac = mc.spectral_factorize(low_rank)
    u = fac.eigenvectors[:, int(np.argmax(np.abs(fac.eigenvalues)))]
    survived = mc.hard_threshold(np.outer(u, u), 1.0 / (2.0 * k))
    return {int(i) for i in np.flatnonzero(np.any(survived != 0, axis=1))}

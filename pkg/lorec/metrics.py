# File: lorec/metrics.py
# Scoring an estimate against the ground truth it was drawn from, and
# reducing per-replication reports to mean / standard-error rows.

import logging
import math

import numpy as np

from lorec import matrix_core as mc
from lorec.models import RecoveryReport
from lorec.solver import SUPPORT_CUTOFF
from lorec.utils.errors import InvalidInputError, SingularMatrixError

logger = logging.getLogger(__name__)

# Report fields aggregated as a mean, and boolean fields aggregated as a
# percentage of replications.
NUMERIC_FIELDS = (
    'spectral_loss', 'frobenius_loss', 'max_loss', 'eigen_distance',
    'rank_estimated', 'pct_true_positive', 'pct_true_negative',
    'low_rank_spectral_loss', 'sparse_max_loss', 'joint_frobenius',
    'inverse_spectral_loss', 'inverse_frobenius_loss',
)
FREQUENCY_FIELDS = ('rank_correct', 'sign_recovered')


def _check_dims(a, b, what):
    if a.shape != b.shape:
        raise InvalidInputError(f'{what}: dimension mismatch {a.shape} vs {b.shape}')


def _share(hit, population):
    """Percentage of `population` entries that are also in `hit` (100 if empty)."""
    total = int(np.count_nonzero(population))
    if total == 0:
        return 100.0
    return 100.0 * int(np.count_nonzero(hit & population)) / total


def eigen_distance(a, b):
    """max_i |Λ_i(A) − Λ_i(B)| with both spectra sorted descending."""
    ea = mc.spectral_factorize(a).eigenvalues
    eb = mc.spectral_factorize(b).eigenvalues
    return float(np.abs(ea - eb).max())


def inverse_losses(estimate, sigma):
    """(spectral, Frobenius) loss of Σ̂⁻¹ against Σ*⁻¹, or (None, None).

    Σ̂ only has to be nonsingular; thresholded estimates can be indefinite.
    """
    try:
        diff = mc.invert_symmetric(estimate) - mc.invert_spd(sigma)
    except SingularMatrixError as exc:
        logger.warning('inverse losses skipped: %s', exc)
        return None, None
    return mc.operator_norm(diff), mc.frobenius(diff)


def joint_frobenius(decomposition, truth):
    """|L̂ − L*|_F² + |Ŝ − S*|_F²."""
    _check_dims(decomposition.low_rank, truth.low_rank, 'joint_frobenius')
    return (mc.frobenius(decomposition.low_rank - truth.low_rank) ** 2
            + mc.frobenius(decomposition.sparse - truth.sparse) ** 2)


def score(estimate, decomposition, truth):
    """RecoveryReport of one estimate against a GroundTruthModel.

    Structure fields (rank, support, signs, per-part losses) are filled only
    when a decomposition is given.
    """
    estimate = mc.as_symmetric(estimate, 'estimate')
    sigma = truth.sigma
    _check_dims(estimate, sigma, 'score')
    diff = estimate - sigma
    inv_spec, inv_frob = inverse_losses(estimate, sigma)
    fields = {
        'spectral_loss': mc.operator_norm(diff),
        'frobenius_loss': mc.frobenius(diff),
        'max_loss': float(np.abs(diff).max()),
        'eigen_distance': eigen_distance(estimate, sigma),
        'inverse_spectral_loss': inv_spec,
        'inverse_frobenius_loss': inv_frob,
    }
    if decomposition is not None:
        _check_dims(decomposition.sparse, sigma, 'score')
        detected = np.abs(decomposition.sparse) > SUPPORT_CUTOFF
        true_support = truth.sparse != 0
        estimated_signs = np.where(detected, np.sign(decomposition.sparse), 0.0)
        rank = decomposition.rank
        fields.update(
            rank_estimated=rank,
            rank_correct=rank == truth.true_rank,
            pct_true_positive=_share(detected, true_support),
            pct_true_negative=_share(~detected, ~true_support),
            sign_recovered=bool(np.array_equal(estimated_signs, np.sign(truth.sparse))),
            low_rank_spectral_loss=mc.operator_norm(decomposition.low_rank - truth.low_rank),
            sparse_max_loss=float(np.abs(decomposition.sparse - truth.sparse).max()),
            joint_frobenius=joint_frobenius(decomposition, truth),
        )
    return RecoveryReport(**fields)


def loading_angle(u1, u2):
    """(cosine, degrees) between two loading vectors, ignoring sign."""
    u1 = np.asarray(u1, dtype=np.float64).ravel()
    u2 = np.asarray(u2, dtype=np.float64).ravel()
    if u1.shape != u2.shape:
        raise InvalidInputError(f'loading vectors differ in length: {u1.size} vs {u2.size}')
    n1, n2 = np.linalg.norm(u1), np.linalg.norm(u2)
    if n1 == 0 or n2 == 0:
        raise InvalidInputError('loading angle is undefined for a zero vector')
    cosine = min(1.0, abs(float(u1 @ u2)) / (n1 * n2))
    return cosine, math.degrees(math.acos(cosine))


def _mean_se(values):
    m = len(values)
    mean = math.fsum(values) / m
    if m == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (m - 1)
    return mean, math.sqrt(var / m)


def aggregate(reports):
    """Mean and standard error (sd/√m) of every populated report field.

    Boolean fields become percentages of replications (`rank_correct_pct`,
    `sign_recovered_pct`). Fields that are empty in every report are left out.
    """
    reports = list(reports)
    if not reports:
        raise InvalidInputError('cannot aggregate an empty list of reports')
    summary = {'replications': len(reports)}
    for name in NUMERIC_FIELDS:
        values = [float(getattr(r, name)) for r in reports if getattr(r, name) is not None]
        if values:
            summary[name], summary[f'{name}_se'] = _mean_se(values)
    for name in FREQUENCY_FIELDS:
        values = [100.0 * bool(getattr(r, name)) for r in reports if getattr(r, name) is not None]
        if values:
            summary[f'{name}_pct'], summary[f'{name}_pct_se'] = _mean_se(values)
    return summary


def report_row(report, **labels):
    """One CSV row: labels (estimator, p, replication, ...) then report fields."""
    return {**labels, **report.model_dump()}

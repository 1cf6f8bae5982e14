# File: lorec/tuning.py
# Penalty selection: K-fold cross-validation on Frobenius loss (the operative
# selector), plus the rate formulas from the recovery theory for rate-shape
# experiments. The theory's constants are unknown, so they surface as scale
# factors defaulting to 1.

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from lorec import matrix_core as mc
from lorec.estimators import estimate_from_covariance
from lorec.models import CoherenceParams, EstimatorSpec, PenaltyGrid
from lorec.models.estimator import REQUIRED_PARAMS
from lorec.utils import make_rng
from lorec.utils.errors import InvalidInputError, RegimeError

logger = logging.getLogger(__name__)

DEFAULT_FOLDS = 5
DEFAULT_GRID_SIZE = 10
# Multiples of sqrt(log p / n) tried for the input threshold of the
# thresholded-input variant.
TAU_RATE_MULTIPLES = (0.5, 1.0, 2.0)


# ── grids ────────────────────────────────────────────────────────────────────
def _span(top, num):
    """num log-spaced values from 0.01·top to top."""
    return np.geomspace(0.01 * top, top, num).tolist()


def default_grid(sigma, kind='lorec', num=DEFAULT_GRID_SIZE, n=None):
    """Grid that brackets the active region of each penalty.

    λ spans [0.01, 1]·‖Σ‖₂ and ρ spans [0.01, 1]·|Σ|_max: above the top of
    either range the corresponding prox step zeroes everything.
    """
    sigma = mc.as_symmetric(sigma, 'covariance input')
    p = sigma.shape[0]
    op = mc.operator_norm(sigma)
    top = float(np.abs(sigma).max())
    if op <= 0:
        raise InvalidInputError('cannot build a penalty grid for a zero covariance')
    values = {}
    if kind in ('lorec', 'lorec_thresholded_input'):
        values['lambda_values'] = _span(op, num)
        values['rho_values'] = _span(top, num)
    if kind == 'hard_threshold':
        off = np.abs(sigma[~np.eye(p, dtype=bool)])
        off_top = float(off.max()) if off.size else 0.0
        values['tau_values'] = _span(off_top, num) if off_top > 0 else [0.0]
    if kind == 'lorec_thresholded_input':
        if n is not None and n > 1 and p > 1:
            rate = math.sqrt(math.log(p) / n)
            values['tau_values'] = [m * rate for m in TAU_RATE_MULTIPLES]
        else:
            values['tau_values'] = _span(top, len(TAU_RATE_MULTIPLES))
    if kind == 'shrink_to_identity':
        values['w_values'] = np.linspace(0.0, 1.0, num).tolist()
    return PenaltyGrid(**values)


# ── cross-validation ─────────────────────────────────────────────────────────
@dataclass
class CVResult:
    kind: str
    best_params: dict
    loss_table: pd.DataFrame   # one row per (grid point, fold)
    mean_losses: pd.DataFrame  # one row per grid point

    @property
    def best_spec(self):
        return EstimatorSpec(kind=self.kind, params=self.best_params)


def fold_indices(n, folds, seed):
    """Shuffle rows once, then cut them into `folds` contiguous groups."""
    if folds < 2 or n < folds:
        raise InvalidInputError(f'need n >= folds >= 2, got n={n}, folds={folds}')
    order = make_rng(seed).permutation(n)
    groups = np.array_split(order, folds)
    for g in groups:
        if len(g) < 2:
            raise InvalidInputError(f'each fold needs at least 2 rows; n={n} is too small for {folds} folds')
        if n - len(g) < 2:
            raise InvalidInputError('each training split needs at least 2 rows')
    return groups


def _score_fold(data, holdout, kind, points, solver_options):
    """Frobenius loss of every grid point on one fold, warm-starting along the grid."""
    mask = np.ones(data.shape[0], dtype=bool)
    mask[holdout] = False
    train_cov = mc.sample_covariance(data[mask])
    test_cov = mc.sample_covariance(data[holdout])
    losses, seen, warm = [], {}, None
    for params in points:
        key = tuple(params.get(k) for k in REQUIRED_PARAMS[kind])
        if key in seen:
            losses.append(seen[key])
            continue
        fitted, decomposition = estimate_from_covariance(
            EstimatorSpec(kind=kind, params=params), train_cov, init=warm, **solver_options)
        if decomposition is not None:
            warm = decomposition
        loss = mc.frobenius(fitted - test_cov) ** 2
        seen[key] = loss
        losses.append(loss)
    return losses


def kfold_cv(data, grid=None, folds=DEFAULT_FOLDS, estimator_kind='lorec', seed=0,
             n_jobs=1, **solver_options):
    """Pick the grid point with the smallest mean held-out Frobenius loss.

    Loss of a fit on the training folds is |Σ̂ − Σ_holdout|_F², Σ_holdout being
    the sample covariance of the held-out fold. Ties go to the larger penalties.
    Folds are scored in parallel with `n_jobs` workers; results are reduced in
    grid order, so the outcome does not depend on scheduling.
    """
    data = np.asarray(data, dtype=np.float64)
    n = data.shape[0]
    kind = estimator_kind
    if kind not in REQUIRED_PARAMS:
        raise InvalidInputError(f'unknown estimator kind {kind!r}')
    groups = fold_indices(n, folds, seed)
    if grid is None:
        grid = default_grid(mc.sample_covariance(data), kind, n=n)
    points = grid.points(kind)

    per_fold = Parallel(n_jobs=n_jobs)(
        delayed(_score_fold)(data, g, kind, points, solver_options) for g in groups)

    keys = REQUIRED_PARAMS[kind]
    rows = []
    for i, params in enumerate(points):
        for f, losses in enumerate(per_fold):
            rows.append({**{k: params[k] for k in keys}, 'point': i, 'fold': f, 'loss': losses[i]})
    table = pd.DataFrame(rows, columns=[*keys, 'point', 'fold', 'loss'])
    means = table.groupby('point', sort=True)['loss'].mean()

    best_i, best_loss, best_key = None, math.inf, None
    for i, params in enumerate(points):
        key = tuple(params[k] for k in keys)
        loss = float(means.loc[i])
        if loss < best_loss or (loss == best_loss and key > best_key):
            best_i, best_loss, best_key = i, loss, key

    mean_table = pd.DataFrame(
        [{**points[i], 'mean_loss': float(means.loc[i])} for i in range(len(points))],
        columns=[*keys, 'mean_loss'])
    logger.info('cv %s: selected %s (mean loss %.6g over %d folds, %d grid points)',
                kind, points[best_i], best_loss, folds, len(points))
    return CVResult(kind=kind, best_params=dict(points[best_i]),
                    loss_table=table.drop(columns='point'), mean_losses=mean_table)


# ── theory-driven penalties ──────────────────────────────────────────────────
def theoretical_penalty(coherence, n, p, scale_c1=1.0):
    """(λ, ρ) with λ = C₁·max((1/ξ)·√(log p / n), √(p/n)) and ρ = γλ.

    Only meaningful when n ≥ p; for spiked models with n < p use
    `spike_theoretical_penalty`.
    """
    if n < p:
        raise RegimeError(
            f'theoretical_penalty assumes n >= p (got n={n}, p={p}); '
            'use spike_theoretical_penalty with a thresholded input instead')
    if not isinstance(coherence, CoherenceParams):
        coherence = CoherenceParams.model_validate(coherence)
    lam = scale_c1 * max(math.sqrt(math.log(p) / n) / coherence.xi, math.sqrt(p / n))
    return lam, coherence.gamma * lam


def spike_theoretical_penalty(k, s, n, p, scale_c2=1.0, scale_c3=1.0, scale_tau=1.0):
    """(λ, ρ, τ) for the spiked model fitted on a hard-thresholded input:
    λ = C₂(k+s)·r, ρ = C₃(√k + √(s/k))·r, τ = C_τ·r with r = √(log p / n)."""
    if k < 1 or s < 1 or n < 2 or p < 2:
        raise InvalidInputError(f'need k, s >= 1 and n, p >= 2 (got k={k}, s={s}, n={n}, p={p})')
    rate = math.sqrt(math.log(p) / n)
    lam = scale_c2 * (k + s) * rate
    rho = scale_c3 * (math.sqrt(k) + math.sqrt(s / k)) * rate
    return lam, rho, scale_tau * rate


def spike_xi_bound(k):
    """Upper bound 2/√k on ξ(T) for a spike with k nonzero coordinates."""
    return 2.0 / math.sqrt(k)


def spike_mu(s):
    """μ(Ω) = s for a sparse part with s nonzeros per row."""
    return float(s)


def spike_coherence(k, s):
    """(ξ bound, μ) for a spike on k coordinates over an s-sparse base."""
    if k < 1 or s < 1:
        raise InvalidInputError(f'need k, s >= 1 (got k={k}, s={s})')
    return spike_xi_bound(k), spike_mu(s)

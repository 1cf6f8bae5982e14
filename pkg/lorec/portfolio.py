# File: lorec/portfolio.py
# Markowitz minimum-variance weights from an estimated covariance and the
# rolling annual backtest:
#   - each test year's portfolio is built from the `window_months` months
#     before it and held unchanged for the 12 months of that year
#   - tunable estimators pick their parameters by the realized variance the
#     candidate portfolios achieved over the preceding `tuning_lookback_years`

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from dateutil.relativedelta import relativedelta
from joblib import Parallel, delayed

from lorec import matrix_core as mc
from lorec.estimators import estimate_from_covariance
from lorec.metrics import loading_angle
from lorec.models import BacktestSummary, EstimatorSpec, YearSummary
from lorec.models.estimator import REQUIRED_PARAMS
from lorec.solver import rank_one_loading
from lorec.tuning import default_grid
from lorec.utils.errors import (
    DegenerateConstraintError, InsufficientHistoryError, InvalidInputError, SingularMatrixError,
)

logger = logging.getLogger(__name__)

WINDOW_MONTHS = 120
TUNING_LOOKBACK_YEARS = 5
# Points per axis of the grid a backtest tunes over when none is given.
BACKTEST_GRID_SIZE = 5
DEGENERATE_RATIO = 1e-12


@dataclass(frozen=True, eq=False)
class ReturnsPanel:
    """n monthly return rows for p assets. `dates` are first-of-month dates."""
    dates: list
    tickers: list
    returns: np.ndarray

    def __post_init__(self):
        r = self.returns
        if r.ndim != 2 or r.shape != (len(self.dates), len(self.tickers)):
            raise InvalidInputError(
                f'returns shape {r.shape} does not match {len(self.dates)} dates x {len(self.tickers)} tickers')
        if not np.all(np.isfinite(r)):
            raise InvalidInputError('returns panel contains missing or infinite values')
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise InvalidInputError('panel dates must be strictly increasing')

    @property
    def n_months(self):
        return len(self.dates)

    def is_contiguous(self):
        return all(a + relativedelta(months=1) == b for a, b in zip(self.dates, self.dates[1:]))

    def complete_years(self):
        """{year: (first row, stop row)} for calendar years with all 12 months."""
        rows = {}
        for i, d in enumerate(self.dates):
            rows.setdefault(d.year, []).append(i)
        return {y: (idx[0], idx[-1] + 1) for y, idx in rows.items() if len(idx) == 12}


@dataclass(frozen=True, eq=False)
class PortfolioWeights:
    weights: np.ndarray
    target_q: float = None

    @property
    def budget_error(self):
        return abs(math.fsum(self.weights) - 1.0)


def markowitz_weights(sigma, mu=None, q=None):
    """Minimum-variance weights under wᵀ1 = 1, plus wᵀμ = q when q is given.

    With A₁ = 1ᵀΣ⁻¹1, A₂ = 1ᵀΣ⁻¹μ and A₃ = μᵀΣ⁻¹μ the constrained solution is
    w = ((A₃ − qA₂)Σ⁻¹1 + (qA₁ − A₂)Σ⁻¹μ) / (A₁A₃ − A₂²); without q it is the
    global minimum-variance portfolio Σ⁻¹1 / A₁.
    """
    sigma = mc.as_symmetric(sigma, 'covariance estimate')
    p = sigma.shape[0]
    inv = mc.invert_symmetric(sigma)
    ones = np.ones(p)
    inv_ones = inv @ ones
    a1 = float(ones @ inv_ones)
    if q is None:
        if abs(a1) <= DEGENERATE_RATIO * float(np.abs(inv).sum()):
            raise DegenerateConstraintError('1ᵀΣ⁻¹1 vanishes; the budget constraint is degenerate')
        return PortfolioWeights(weights=inv_ones / a1)

    if mu is None:
        raise InvalidInputError('a target return q needs an expected-return vector mu')
    mu = np.asarray(mu, dtype=np.float64).ravel()
    if mu.shape != (p,):
        raise InvalidInputError(f'mu has length {mu.size}, covariance is {p}x{p}')
    inv_mu = inv @ mu
    a2 = float(ones @ inv_mu)
    a3 = float(mu @ inv_mu)
    det = a1 * a3 - a2 * a2
    if abs(det) <= DEGENERATE_RATIO * abs(a1 * a3):
        raise DegenerateConstraintError(
            'A1*A3 - A2^2 is numerically zero: mu is (nearly) parallel to the ones vector')
    w = ((a3 - q * a2) / det) * inv_ones + ((q * a1 - a2) / det) * inv_mu
    return PortfolioWeights(weights=w, target_q=q)


def expected_return_vector(panel, window):
    """Per-asset mean return over the rows selected by `window` (a slice)."""
    rows = panel.returns[window]
    if rows.shape[0] == 0:
        raise InvalidInputError('expected returns need a nonempty window')
    return rows.mean(axis=0)


# ── backtest ─────────────────────────────────────────────────────────────────
@dataclass
class _Outcome:
    monthly_returns: np.ndarray
    rank: int = None
    loading: list = field(default=None)


def _hold_year(panel, spec, year_rows, window_months, q, solver_options):
    """Build the portfolio from the window before `year_rows` and hold it."""
    start, stop = year_rows
    window = slice(start - window_months, start)
    sigma = mc.sample_covariance(panel.returns[window])
    mu = expected_return_vector(panel, window)
    estimate, decomposition = estimate_from_covariance(spec, sigma, **solver_options)
    try:
        weights = markowitz_weights(estimate, mu, q)
    except SingularMatrixError as exc:
        logger.warning('%s estimate is singular for the window ending at row %d (%s); '
                       'holding the identity-covariance portfolio', spec.label(), start, exc)
        weights = markowitz_weights(np.eye(sigma.shape[0]), mu, q)
    outcome = _Outcome(monthly_returns=panel.returns[start:stop] @ weights.weights)
    if decomposition is not None:
        outcome.rank = decomposition.rank
        if outcome.rank >= 1:
            outcome.loading = rank_one_loading(decomposition).tolist()
    return outcome


def _variance(values):
    return float(np.var(values, ddof=1)) if len(values) > 1 else 0.0


def _mean_se(values):
    values = list(values)
    mean = math.fsum(values) / len(values)
    if len(values) == 1:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1)) / math.sqrt(len(values))


def _candidates(panel, estimator, grid, first_window, window_months):
    """Specs to evaluate: one fixed spec, or every point of a tuning grid."""
    if isinstance(estimator, EstimatorSpec) and grid is None:
        return [estimator], False
    kind = estimator.kind if isinstance(estimator, EstimatorSpec) else estimator
    if kind not in REQUIRED_PARAMS:
        raise InvalidInputError(f'unknown estimator kind {kind!r}')
    if not REQUIRED_PARAMS[kind]:
        return [EstimatorSpec(kind=kind)], False
    if grid is None:
        sigma = mc.sample_covariance(panel.returns[first_window])
        grid = default_grid(sigma, kind, num=BACKTEST_GRID_SIZE, n=window_months)
    return [EstimatorSpec(kind=kind, params=pt) for pt in grid.points(kind)], True


def rolling_backtest(panel, estimator, q=None, window_months=WINDOW_MONTHS,
                     tuning_lookback_years=TUNING_LOOKBACK_YEARS, grid=None, n_jobs=1,
                     **solver_options):
    """Annual rebalancing backtest. Returns a BacktestSummary.

    `estimator` is either a full EstimatorSpec (used as is) or an estimator kind
    (tuned over `grid`, or a default grid built from the first window). Every
    estimator is evaluated on the same test years: the complete calendar years
    preceded by `window_months` of history plus `tuning_lookback_years`
    construction years.
    """
    if window_months < 2:
        raise InvalidInputError(f'window must cover at least 2 months, got {window_months}')
    if tuning_lookback_years < 1:
        raise InvalidInputError(f'tuning lookback must be at least 1 year, got {tuning_lookback_years}')
    if not panel.is_contiguous():
        raise InvalidInputError('returns panel must have one row per consecutive month')

    required = window_months + 12 * tuning_lookback_years + 12
    years = panel.complete_years()
    usable = sorted(y for y, (start, _) in years.items() if start >= window_months)
    test_years = [y for y in usable
                  if all(y - k in years and years[y - k][0] >= window_months
                         for k in range(1, tuning_lookback_years + 1))]
    if not test_years:
        raise InsufficientHistoryError(
            f'backtest needs at least {required} consecutive months '
            f'({window_months}-month window + {tuning_lookback_years} tuning years + 1 test year), '
            f'panel has {panel.n_months}')

    eval_years = sorted({y - k for y in test_years for k in range(tuning_lookback_years + 1)})
    first_start = years[eval_years[0]][0]
    candidates, tuned = _candidates(
        panel, estimator, grid, slice(first_start - window_months, first_start), window_months)
    kind = candidates[0].kind
    if not tuned:
        eval_years = test_years

    tasks = [(c, y) for c in range(len(candidates)) for y in eval_years]
    logger.info('backtest %s: %d candidate(s) x %d year(s), test years %d-%d',
                kind, len(candidates), len(eval_years), test_years[0], test_years[-1])
    outcomes = Parallel(n_jobs=n_jobs)(
        delayed(_hold_year)(panel, candidates[c], years[y], window_months, q, solver_options)
        for c, y in tasks)
    table = dict(zip(tasks, outcomes))

    keys = REQUIRED_PARAMS[kind]
    records = []
    for y in test_years:
        chosen = 0
        if tuned:
            best_var, best_key = math.inf, None
            for c, spec in enumerate(candidates):
                past = np.concatenate([table[(c, y - k)].monthly_returns
                                       for k in range(tuning_lookback_years, 0, -1)])
                var = _variance(past)
                key = tuple(spec.params[k] for k in keys)
                if var < best_var or (var == best_var and key > best_key):
                    chosen, best_var, best_key = c, var, key
        outcome = table[(chosen, y)]
        monthly = outcome.monthly_returns
        records.append(YearSummary(
            year=y,
            params=dict(candidates[chosen].params),
            monthly_returns=monthly.tolist(),
            mean=float(monthly.mean()),
            variance=_variance(monthly),
            rank=outcome.rank,
            loading=outcome.loading,
        ))
        logger.info('backtest %d: %s mean %.6g variance %.6g',
                    y, candidates[chosen].label(), records[-1].mean, records[-1].variance)

    mean_return, mean_se = _mean_se(r.mean for r in records)
    variance, variance_se = _mean_se(r.variance for r in records)
    pooled = np.concatenate([r.monthly_returns for r in records])
    return BacktestSummary(
        estimator=kind,
        q=q,
        window_months=window_months,
        tuning_lookback_years=tuning_lookback_years,
        tickers=list(panel.tickers),
        years=records,
        mean_return=mean_return,
        mean_return_se=mean_se,
        variance=variance,
        variance_se=variance_se,
        pooled_variance=_variance(pooled),
    )


def per_year_frame(summary):
    """One row per test year: year, params, mean, variance, rank."""
    rows = []
    for r in summary.years:
        rows.append({'year': r.year, **r.params, 'mean': r.mean, 'variance': r.variance, 'rank': r.rank})
    return pd.DataFrame(rows)


def compare_loadings(summary, reference):
    """Angle between each year's leading loading and a reference loading.

    `reference` is one vector for every year, or a {year: vector} mapping.
    Years without a loading (or without a reference) are skipped.
    """
    rows = []
    for r in summary.years:
        ref = reference.get(r.year) if isinstance(reference, dict) else reference
        if r.loading is None or ref is None:
            continue
        cosine, degrees = loading_angle(r.loading, ref)
        rows.append({'year': r.year, 'cosine': cosine, 'degrees': degrees})
    return pd.DataFrame(rows, columns=['year', 'cosine', 'degrees'])

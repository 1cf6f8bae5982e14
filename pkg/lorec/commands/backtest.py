# File: lorec/commands/backtest.py
# `backtest`: rolling annual minimum-variance backtest on a returns CSV.
# Writes backtest.json, per_year.csv, manifest.json and, with --loadings,
# loadings.csv (per-year angle to a reference loading vector).

import logging
import os

import pandas as pd

from lorec.commands import add_jobs_flag, add_solver_flags, prepare_run_dir, setting, solver_options, write_run_manifest
from lorec.models import ESTIMATOR_KINDS, EstimatorSpec
from lorec.models.estimator import REQUIRED_PARAMS
from lorec.portfolio import TUNING_LOOKBACK_YEARS, WINDOW_MONTHS, compare_loadings, per_year_frame, rolling_backtest
from lorec.storage.results import write_backtest, write_table
from lorec.storage.returns import read_returns_csv
from lorec.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('backtest', help='rolling minimum-variance portfolio backtest')
    parser.add_argument('returns', help='returns CSV (date,TICKER1,...)')
    parser.add_argument('--estimator', choices=ESTIMATOR_KINDS, default='lorec')
    parser.add_argument('--lambda', dest='lam', type=float, default=None)
    parser.add_argument('--rho', type=float, default=None)
    parser.add_argument('--tau', type=float, default=None)
    parser.add_argument('--w', type=float, default=None)
    parser.add_argument('--q', type=float, default=None, help='target expected return (omit for global minimum variance)')
    parser.add_argument('--window', type=int, default=WINDOW_MONTHS, help='estimation window in months')
    parser.add_argument('--lookback', type=int, default=TUNING_LOOKBACK_YEARS, help='tuning lookback in years')
    parser.add_argument('--no-annualize', action='store_true', help='returns are already annualized')
    parser.add_argument('--loadings', default=None, help='reference loadings CSV (ticker,loading)')
    parser.add_argument('--out', required=True, help='run directory')
    add_jobs_flag(parser)
    add_solver_flags(parser)
    parser.set_defaults(handler=run)


def estimator_from_args(args):
    """A fixed EstimatorSpec when parameters were passed, else the kind to tune."""
    given = {'lambda': args.lam, 'rho': args.rho, 'tau': args.tau, 'w': args.w}
    given = {k: v for k, v in given.items() if v is not None}
    if not given:
        return args.estimator
    return EstimatorSpec(kind=args.estimator, params={k: given.get(k) for k in REQUIRED_PARAMS[args.estimator]})


def read_reference_loadings(path, tickers):
    frame = pd.read_csv(path)
    if not {'ticker', 'loading'} <= set(frame.columns):
        raise InvalidInputError(f'{path}: expected columns ticker,loading')
    lookup = dict(zip(frame['ticker'].astype(str), frame['loading'].astype(float)))
    missing = [t for t in tickers if t not in lookup]
    if missing:
        raise InvalidInputError(f'{path}: no reference loading for {", ".join(missing)}')
    return [lookup[t] for t in tickers]


def run(args):
    panel = read_returns_csv(args.returns, annualize=not args.no_annualize)
    summary = rolling_backtest(
        panel, estimator_from_args(args), q=args.q,
        window_months=args.window, tuning_lookback_years=args.lookback,
        n_jobs=setting(args.jobs, 'JOBS'), **solver_options(args))

    run_dir = prepare_run_dir(args.out)
    write_backtest(run_dir, summary, per_year_frame(summary))
    inputs = [args.returns]
    if args.loadings:
        reference = read_reference_loadings(args.loadings, summary.tickers)
        write_table(os.path.join(run_dir, 'loadings.csv'), compare_loadings(summary, reference))
        inputs.append(args.loadings)
    write_run_manifest(run_dir, 'backtest', args, inputs=inputs)
    print(f'{summary.estimator}: {len(summary.years)} test year(s), mean {summary.mean_return:.4g} '
          f'({summary.mean_return_se:.2g}), variance {summary.variance:.4g} ({summary.variance_se:.2g})')
    return 0

# File: lorec/commands/simulate.py
# `simulate`: the Monte-Carlo protocol. For every replication: draw a ground
# truth model, sample n observations, tune each estimator by K-fold CV, fit,
# score. Writes replications.csv (one row per replication and estimator),
# summary.csv (mean / se per estimator) and manifest.json.

import logging
import os

import pandas as pd
from joblib import Parallel, delayed

from lorec import matrix_core as mc
from lorec.commands import (
    add_jobs_flag, add_solver_flags, prepare_run_dir, setting, solver_options, write_run_manifest,
)
from lorec.estimators import estimate
from lorec.metrics import aggregate, report_row, score
from lorec.model_gen import FAMILIES, generate, sample_gaussian
from lorec.models import ESTIMATOR_KINDS, EstimatorSpec
from lorec.models.estimator import REQUIRED_PARAMS
from lorec.storage.results import write_table
from lorec.tuning import default_grid, kfold_cv
from lorec.utils import child_seed
from lorec.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

DEFAULT_ESTIMATORS = 'lorec,sample,hard_threshold,shrink_to_identity'
PARAM_COLUMNS = ('lambda', 'rho', 'tau', 'w')


def register(subparsers):
    parser = subparsers.add_parser('simulate', help='run the simulation protocol and write loss tables')
    parser.add_argument('--family', choices=FAMILIES, required=True)
    parser.add_argument('--p', type=int, required=True, help='dimension')
    parser.add_argument('--n', type=int, default=None, help='observations per replication (default 100)')
    parser.add_argument('--reps', type=int, default=None, help='replications (default 100)')
    parser.add_argument('--estimators', default=DEFAULT_ESTIMATORS,
                        help=f'comma-separated estimator kinds (default {DEFAULT_ESTIMATORS})')
    parser.add_argument('--folds', type=int, default=None)
    parser.add_argument('--grid-size', type=int, default=None)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--out', required=True, help='run directory')
    add_jobs_flag(parser)
    add_solver_flags(parser)
    parser.set_defaults(handler=run)


def parse_estimators(text):
    kinds = [k.strip() for k in text.split(',') if k.strip()]
    unknown = [k for k in kinds if k not in ESTIMATOR_KINDS]
    if not kinds or unknown:
        raise InvalidInputError(f'unknown estimator kind(s) {unknown}; choose from {ESTIMATOR_KINDS}')
    return kinds


def run_replication(index, family, p, n, kinds, seed, folds, grid_size, options):
    """Every estimator on one replication.

    Returns (kind, report, csv row) triples in `kinds` order.
    """
    rep_seed = child_seed(seed, index)
    model = generate(family, p, rep_seed)
    data = sample_gaussian(model, n, child_seed(rep_seed, 0))
    rows = []
    for kind in kinds:
        if REQUIRED_PARAMS[kind]:
            grid = default_grid(mc.sample_covariance(data), kind, num=grid_size, n=n)
            spec = kfold_cv(data, grid, folds=folds, estimator_kind=kind, seed=rep_seed, **options).best_spec
        else:
            spec = EstimatorSpec(kind=kind)
        fitted, decomposition = estimate(spec, data, **options)
        report = score(fitted, decomposition, model)
        params = {k: spec.params.get(k) for k in PARAM_COLUMNS}
        rows.append((kind, report, report_row(report, estimator=kind, family=family, p=p, n=n,
                                              replication=index, **params)))
    logger.info('replication %d done', index)
    return rows


def run(args):
    n = setting(args.n, 'N_OBS')
    reps = setting(args.reps, 'REPS')
    folds = setting(args.folds, 'FOLDS')
    grid_size = setting(args.grid_size, 'GRID_SIZE')
    jobs = setting(args.jobs, 'JOBS')
    if reps < 1 or n < 2:
        raise InvalidInputError(f'need reps >= 1 and n >= 2, got reps={reps}, n={n}')
    kinds = parse_estimators(args.estimators)
    options = solver_options(args)
    run_dir = prepare_run_dir(args.out)

    logger.info('simulate %s p=%d n=%d: %d replication(s) of %s', args.family, args.p, n, reps, kinds)
    per_rep = Parallel(n_jobs=jobs)(
        delayed(run_replication)(r, args.family, args.p, n, kinds, args.seed, folds, grid_size, options)
        for r in range(reps))
    results = [triple for rep in per_rep for triple in rep]
    rows = [row for _, _, row in results]
    write_table(os.path.join(run_dir, 'replications.csv'), pd.DataFrame(rows))

    summary = []
    for kind in kinds:
        reports = [report for k, report, _ in results if k == kind]
        summary.append({'estimator': kind, 'family': args.family, 'p': args.p, 'n': n, **aggregate(reports)})
    write_table(os.path.join(run_dir, 'summary.csv'), pd.DataFrame(summary))
    write_run_manifest(run_dir, 'simulate', args, seed=args.seed)
    print(f'Wrote {len(rows)} row(s) to {run_dir}')
    return 0

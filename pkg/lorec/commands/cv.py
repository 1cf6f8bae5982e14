# File: lorec/commands/cv.py
# `cv`: K-fold cross-validation of one estimator on an observation CSV.
# Writes cv_losses.csv (params, fold, loss), cv_mean.csv, selected.json and
# manifest.json.

import os

from lorec import matrix_core as mc
from lorec.commands import add_jobs_flag, add_solver_flags, prepare_run_dir, setting, solver_options, write_run_manifest
from lorec.models import ESTIMATOR_KINDS
from lorec.storage.matrices import read_csv_array
from lorec.storage.results import write_json, write_table
from lorec.tuning import default_grid, kfold_cv


def register(subparsers):
    parser = subparsers.add_parser('cv', help='cross-validate an estimator on observations')
    parser.add_argument('data', help='n×p observation CSV (no header)')
    parser.add_argument('--estimator', choices=ESTIMATOR_KINDS, default='lorec')
    parser.add_argument('--folds', type=int, default=None)
    parser.add_argument('--grid-size', type=int, default=None)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--out', required=True, help='run directory')
    add_jobs_flag(parser)
    add_solver_flags(parser)
    parser.set_defaults(handler=run)


def run(args):
    data = read_csv_array(args.data)
    grid = default_grid(mc.sample_covariance(data), args.estimator,
                        num=setting(args.grid_size, 'GRID_SIZE'), n=data.shape[0])
    result = kfold_cv(data, grid, folds=setting(args.folds, 'FOLDS'), estimator_kind=args.estimator,
                      seed=args.seed, n_jobs=setting(args.jobs, 'JOBS'), **solver_options(args))

    run_dir = prepare_run_dir(args.out)
    write_table(os.path.join(run_dir, 'cv_losses.csv'), result.loss_table)
    write_table(os.path.join(run_dir, 'cv_mean.csv'), result.mean_losses)
    write_json(os.path.join(run_dir, 'selected.json'), result.best_spec)
    write_run_manifest(run_dir, 'cv', args, seed=args.seed, inputs=[args.data])
    print(f'selected {result.best_spec.label()}')
    return 0

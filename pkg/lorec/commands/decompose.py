# File: lorec/commands/decompose.py
# `decompose`: solve LOREC on a covariance matrix file, or on the sample
# covariance of an observation file (--data). Penalties come from --lambda /
# --rho or from K-fold CV (--cv, needs --data). Writes L.csv, S.csv,
# result.json and manifest.json.

import logging

from lorec import matrix_core as mc
from lorec.commands import add_solver_flags, prepare_run_dir, setting, solver_options, write_run_manifest
from lorec.estimators import solver_config_for
from lorec.models import EstimatorSpec
from lorec.solver import solve
from lorec.storage.matrices import read_csv_array, read_matrix_csv
from lorec.storage.results import write_decomposition
from lorec.tuning import default_grid, kfold_cv
from lorec.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('decompose', help='low-rank plus sparse decomposition of one matrix')
    parser.add_argument('input', help='covariance matrix CSV (or n×p data CSV with --data)')
    parser.add_argument('--data', action='store_true', help='input holds observations, not a covariance')
    parser.add_argument('--lambda', dest='lam', type=float, default=None, help='nuclear-norm penalty')
    parser.add_argument('--rho', type=float, default=None, help='l1 penalty')
    parser.add_argument('--cv', action='store_true', help='choose lambda and rho by K-fold CV (needs --data)')
    parser.add_argument('--folds', type=int, default=None)
    parser.add_argument('--grid-size', type=int, default=None)
    parser.add_argument('--threshold-input', dest='tau', type=float, default=None,
                        help='hard-threshold the input at tau before solving')
    parser.add_argument('--seed', type=int, default=0, help='fold shuffling seed for --cv')
    parser.add_argument('--out', required=True, help='run directory')
    add_solver_flags(parser)
    parser.set_defaults(handler=run)


def _select_penalties(args, data, options):
    kind = 'lorec' if args.tau is None else 'lorec_thresholded_input'
    if args.cv:
        if data is None:
            raise InvalidInputError('--cv needs observations: pass the data file with --data')
        sigma = mc.sample_covariance(data)
        grid = default_grid(sigma, kind, num=setting(args.grid_size, 'GRID_SIZE'), n=data.shape[0])
        if args.tau is not None:
            grid = grid.model_copy(update={'tau_values': [args.tau]})
        cv = kfold_cv(data, grid, folds=setting(args.folds, 'FOLDS'), estimator_kind=kind,
                      seed=args.seed, **options)
        return cv.best_params['lambda'], cv.best_params['rho']
    if args.lam is None or args.rho is None:
        raise InvalidInputError('pass both --lambda and --rho, or --cv')
    return args.lam, args.rho


def run(args):
    options = solver_options(args)
    if args.data:
        data = read_csv_array(args.input)
        sigma = mc.sample_covariance(data)
    else:
        data = None
        sigma = read_matrix_csv(args.input)
    lam, rho = _select_penalties(args, data, options)
    spec = EstimatorSpec(kind='lorec', params={'lambda': lam, 'rho': rho})

    target = mc.as_symmetric(sigma, 'covariance input')
    if args.tau is not None:
        target = mc.hard_threshold(target, args.tau)
    result = solve(target, solver_config_for(spec, **options))

    run_dir = prepare_run_dir(args.out)
    write_decomposition(run_dir, result)
    write_run_manifest(run_dir, 'decompose', args, seed=args.seed if args.cv else None, inputs=[args.input])
    summary = result.summary()
    print(f'lambda={lam:.6g} rho={rho:.6g}: rank {summary.rank}, support {summary.support_size}, '
          f'{summary.iterations} iteration(s), converged={summary.converged}')
    return 0

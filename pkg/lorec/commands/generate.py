# File: lorec/commands/generate.py
# `generate`: write a ground-truth model directory and, with --n, an n×p
# Gaussian sample drawn from it (samples.csv).

import os

from lorec.commands import prepare_run_dir, write_run_manifest
from lorec.model_gen import FAMILIES, generate, sample_gaussian
from lorec.storage.ground_truth import write_model_dir
from lorec.storage.matrices import write_matrix_csv
from lorec.utils import child_seed


def register(subparsers):
    parser = subparsers.add_parser('generate', help='write a ground-truth covariance model')
    parser.add_argument('--family', choices=FAMILIES, required=True)
    parser.add_argument('--p', type=int, required=True)
    parser.add_argument('--n', type=int, default=None, help='also draw n observations')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--out', required=True, help='run directory')
    parser.set_defaults(handler=run)


def run(args):
    model = generate(args.family, args.p, args.seed)
    run_dir = prepare_run_dir(args.out)
    write_model_dir(os.path.join(run_dir, 'model'), model, seed=args.seed)
    if args.n is not None:
        data = sample_gaussian(model, args.n, child_seed(args.seed, 0))
        write_matrix_csv(os.path.join(run_dir, 'samples.csv'), data)
    write_run_manifest(run_dir, 'generate', args, seed=args.seed)
    print(f'{args.family} model p={args.p} (rank {model.true_rank}) written to {run_dir}')
    return 0

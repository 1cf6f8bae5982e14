# File: lorec/commands/__init__.py
# One module per CLI command. Each exposes
#   register(subparsers)  -> adds its sub-parser and sets `handler`
#   run(args)             -> int exit code
# and shares the helpers below for run directories, manifests and the
# flag > environment > default precedence.

import logging
import os

from config import get_config
from lorec import __version__
from lorec.models import RunManifest
from lorec.storage.results import write_manifest
from lorec.utils import file_digest

logger = logging.getLogger(__name__)


def setting(value, name):
    """Explicit flag value if given, else the configured default."""
    return value if value is not None else getattr(get_config(), name)


def add_solver_flags(parser):
    parser.add_argument('--epsilon', type=float, default=None, help='relative-change stopping tolerance')
    parser.add_argument('--max-iter', type=int, default=None, help='iteration cap')
    parser.add_argument('--step-l', type=float, default=None, help='step constant l (>= 2)')
    parser.add_argument('--no-diag-penalty', action='store_true',
                        help='leave the diagonal of S unpenalized')


def solver_options(args):
    return {
        'epsilon': setting(args.epsilon, 'EPSILON'),
        'max_iter': setting(args.max_iter, 'MAX_ITER'),
        'step_l': setting(args.step_l, 'STEP_L'),
        'penalize_diagonal': not args.no_diag_penalty,
    }


def add_jobs_flag(parser):
    parser.add_argument('--jobs', type=int, default=None,
                        help='worker processes (default: LOREC_JOBS or 1)')


def prepare_run_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def write_run_manifest(run_dir, command, args, seed=None, inputs=()):
    """manifest.json: the command, every parsed flag, the seed and input hashes."""
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ('handler', 'command')}
    manifest = RunManifest(
        command=command,
        config=config,
        seed=seed,
        tool_version=__version__,
        input_digests={os.path.basename(p): file_digest(p) for p in inputs},
    )
    path = write_manifest(run_dir, manifest)
    logger.info('wrote %s', path)
    return path

# File: cli.py
# Command-line entry point: slim orchestrator.
# All command logic lives in lorec/commands/*.py

import argparse
import logging
import sys

from config import get_config
from lorec import __version__
from lorec.commands import backtest, check, cv, decompose, generate, simulate
from lorec.utils import EXIT_UNEXPECTED, exit_code_for
from observability import init_sentry, report_exception

logger = logging.getLogger('lorec.cli')

COMMANDS = (generate, decompose, cv, simulate, backtest, check)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='lorec', description='Low-rank plus sparse covariance estimation toolkit.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for module in COMMANDS:
        module.register(subparsers)
    return parser


def main(argv=None):
    init_sentry()
    get_config().init_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except Exception as exc:  # noqa: BLE001 - mapped to an exit code below
        code = exit_code_for(exc)
        if code == EXIT_UNEXPECTED:
            logger.exception('%s failed unexpectedly', args.command)
            report_exception(exc)
        else:
            logger.error('%s: %s', args.command, exc)
            print(f'ERROR: {exc}', file=sys.stderr)
        return code


if __name__ == '__main__':
    sys.exit(main())

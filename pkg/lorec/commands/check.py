# File: lorec/commands/check.py
# `check`: run the solver oracle suites and print a pass/fail report.

from lorec.checks import SUITES, run_suite
from lorec.utils.errors import CheckFailure


def register(subparsers):
    parser = subparsers.add_parser('check', help='run the solver oracle suites')
    parser.add_argument('--suite', choices=(*SUITES, 'all'), default='all')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--instances', type=int, default=None, help='override the per-suite instance count')
    parser.set_defaults(handler=run)


def run(args):
    names = SUITES if args.suite == 'all' else (args.suite,)
    failed = []
    for name in names:
        report = run_suite(name, seed=args.seed, instances=args.instances)
        status = 'PASS' if report.passed else 'FAIL'
        print(f'{name:6s} {status}  {report.instances} instance(s), worst {report.worst:.3g}')
        for failure in report.failures:
            print(f'    {failure}')
        if not report.passed:
            failed.append(name)
    if failed:
        raise CheckFailure(f'check suite(s) failed: {", ".join(failed)}')
    return 0

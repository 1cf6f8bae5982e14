#!/usr/bin/env python3
"""Write a synthetic monthly returns CSV for trying out `lorec backtest`.

Returns are i.i.d. Gaussian draws around a common monthly mean, with a
covariance built as a few strong factors plus a diagonal (the factor
generator's model, scaled to monthly return units). The output uses the
returns CSV format: `date,A0,A1,...` with YYYY-MM dates.

Usage:
    python scripts/make_synthetic_panel.py --p 30 --months 240 --out returns.csv
"""
import argparse
import os
import sys
from datetime import date

from dateutil.relativedelta import relativedelta

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from lorec.model_gen import gen_factor, sample_gaussian  # noqa: E402
from lorec.portfolio import ReturnsPanel  # noqa: E402
from lorec.storage.returns import write_returns_csv  # noqa: E402
from lorec.utils import child_seed  # noqa: E402

MONTHLY_SCALE = 1e-3  # factor model entries -> monthly return variances
MONTHLY_MEAN = 0.008


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument('--p', type=int, default=30, help='number of assets')
    parser.add_argument('--months', type=int, default=240)
    parser.add_argument('--start', default='1990-01', help='first month (YYYY-MM)')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--out', required=True)
    args = parser.parse_args(argv)

    year, month = (int(x) for x in args.start.split('-'))
    model = gen_factor(args.p, args.seed)
    returns = sample_gaussian(model.sigma * MONTHLY_SCALE, args.months, child_seed(args.seed, 0)) + MONTHLY_MEAN
    first = date(year, month, 1)
    panel = ReturnsPanel(
        dates=[first + relativedelta(months=k) for k in range(args.months)],
        tickers=[f'A{j}' for j in range(args.p)],
        returns=returns,
    )
    write_returns_csv(args.out, panel)
    print(f'{args.months} months x {args.p} assets written to {args.out}')
    return 0


if __name__ == '__main__':
    sys.exit(main())

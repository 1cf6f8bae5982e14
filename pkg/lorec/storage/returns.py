# File: lorec/storage/returns.py
# Returns CSV: header `date,TICKER1,...`, one row per month, dates as YYYY-MM.

import logging
from datetime import datetime

import numpy as np
import pandas as pd
from dateutil import parser as date_parser

from lorec.portfolio import ReturnsPanel
from lorec.storage.matrices import FLOAT_FORMAT
from lorec.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

MONTHS_PER_YEAR = 12
# Day/time filled in for a bare YYYY-MM identifier.
_MONTH_DEFAULT = datetime(2000, 1, 1)


def parse_month(text):
    """'1987-01' (or any date dateutil understands) -> first day of that month."""
    try:
        stamp = date_parser.parse(str(text).strip(), default=_MONTH_DEFAULT)
    except (ValueError, OverflowError) as exc:
        raise InvalidInputError(f'cannot parse month identifier {text!r}') from exc
    return stamp.date().replace(day=1)


def read_returns_csv(path, annualize=True):
    """Load a returns panel, dropping assets with any missing month.

    Monthly returns are multiplied by 12 when `annualize` is set.
    """
    try:
        frame = pd.read_csv(path, dtype={'date': str})
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise InvalidInputError(f'{path}: cannot read returns CSV ({exc})') from exc
    if 'date' not in frame.columns:
        raise InvalidInputError(f'{path}: first column must be named "date"')
    dates = [parse_month(d) for d in frame.pop('date')]
    values = frame.apply(pd.to_numeric, errors='coerce')

    incomplete = [t for t in values.columns if values[t].isna().any()]
    if incomplete:
        logger.warning('dropping %d asset(s) with missing returns: %s',
                       len(incomplete), ', '.join(map(str, incomplete)))
        values = values.drop(columns=incomplete)
    if values.shape[1] == 0:
        raise InvalidInputError(f'{path}: no asset has a complete return history')

    returns = values.to_numpy(dtype=np.float64)
    if annualize:
        returns = returns * MONTHS_PER_YEAR
    return ReturnsPanel(dates=dates, tickers=[str(t) for t in values.columns], returns=returns)


def write_returns_csv(path, panel):
    """Write a panel back out (values as stored, i.e. already annualized if they were)."""
    frame = pd.DataFrame(panel.returns, columns=panel.tickers)
    frame.insert(0, 'date', [d.strftime('%Y-%m') for d in panel.dates])
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return path

# File: lorec/storage/matrices.py
# Matrix CSV: no header, row-major, p lines of p comma-separated decimals.

import numpy as np

from lorec.utils.errors import InvalidInputError

# %.17g round-trips every float64 exactly and prints the same bytes every run.
FLOAT_FORMAT = '%.17g'


def read_csv_array(path):
    """Any numeric CSV (no header) as a 2-D float array."""
    try:
        data = np.loadtxt(path, delimiter=',', dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise InvalidInputError(f'{path}: not a numeric CSV ({exc})') from exc
    if data.size == 0:
        raise InvalidInputError(f'{path}: file is empty')
    return data


def read_matrix_csv(path):
    """Read a square matrix; reject anything that is not p×p."""
    data = read_csv_array(path)
    if data.shape[0] != data.shape[1]:
        raise InvalidInputError(f'{path}: expected a square matrix, got {data.shape[0]}×{data.shape[1]}')
    return data


def write_matrix_csv(path, matrix):
    np.savetxt(path, np.atleast_2d(np.asarray(matrix, dtype=np.float64)),
               delimiter=',', fmt=FLOAT_FORMAT)
    return path

# File: lorec/storage/results.py
# Run-directory artifacts: JSON records (pydantic models), CSV tables (pandas)
# and the manifest. All writers produce the same bytes for the same inputs.

import json
import os

from lorec.storage.matrices import FLOAT_FORMAT, write_matrix_csv

MANIFEST_FILE = 'manifest.json'


def write_json(path, record):
    """A pydantic model (or plain dict) as indented JSON."""
    if hasattr(record, 'model_dump_json'):
        text = record.model_dump_json(indent=2, by_alias=True)
    else:
        text = json.dumps(record, indent=2, sort_keys=True)
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(text + '\n')
    return path


def write_table(path, frame):
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return path


def write_manifest(run_dir, manifest):
    return write_json(os.path.join(run_dir, MANIFEST_FILE), manifest)


def write_decomposition(run_dir, result):
    """L.csv, S.csv and result.json for one solver run."""
    write_matrix_csv(os.path.join(run_dir, 'L.csv'), result.estimate.low_rank)
    write_matrix_csv(os.path.join(run_dir, 'S.csv'), result.estimate.sparse)
    return write_json(os.path.join(run_dir, 'result.json'), result.summary())


def write_backtest(run_dir, summary, per_year):
    """backtest.json plus the per-year CSV."""
    write_json(os.path.join(run_dir, 'backtest.json'), summary)
    return write_table(os.path.join(run_dir, 'per_year.csv'), per_year)

# File: lorec/storage/ground_truth.py
# A generated model on disk: a directory holding
#   sigma.csv, low_rank.csv, sparse.csv   (Matrix CSV)
#   meta.json                             (family, p, true rank, family params, seed)

import json
import os

from lorec.model_gen import GroundTruthModel
from lorec.storage.matrices import read_matrix_csv, write_matrix_csv
from lorec.utils.errors import InvalidInputError

MATRIX_FILES = ('sigma.csv', 'low_rank.csv', 'sparse.csv')


def write_model_dir(out_dir, model, seed=None):
    os.makedirs(out_dir, exist_ok=True)
    write_matrix_csv(os.path.join(out_dir, 'sigma.csv'), model.sigma)
    write_matrix_csv(os.path.join(out_dir, 'low_rank.csv'), model.low_rank)
    write_matrix_csv(os.path.join(out_dir, 'sparse.csv'), model.sparse)
    meta = {**model.meta(), 'seed': seed}
    with open(os.path.join(out_dir, 'meta.json'), 'w', encoding='utf-8') as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    return out_dir


def read_model_dir(model_dir):
    """Load a model directory back into a GroundTruthModel."""
    missing = [f for f in (*MATRIX_FILES, 'meta.json') if not os.path.exists(os.path.join(model_dir, f))]
    if missing:
        raise InvalidInputError(f'{model_dir}: not a model directory (missing {", ".join(missing)})')
    with open(os.path.join(model_dir, 'meta.json'), encoding='utf-8') as fh:
        meta = json.load(fh)
    return GroundTruthModel(
        low_rank=read_matrix_csv(os.path.join(model_dir, 'low_rank.csv')),
        sparse=read_matrix_csv(os.path.join(model_dir, 'sparse.csv')),
        family=meta['family'],
        family_params=meta.get('family_params', {}),
        true_rank=int(meta['true_rank']),
    )

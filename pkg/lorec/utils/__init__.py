# File: lorec/utils/__init__.py
# Shared cross-cutting helpers: seeding, content digests and the error -> exit
# code mapping the CLI and scripts use.

import hashlib

import numpy as np
from pydantic import ValidationError

from lorec.utils.errors import (
    CheckFailure, InvalidInputError, NumericFailureError,
)

# Exit codes. 1 is left for "unexpected" (a bug), which is also what Python
# itself returns for an unhandled exception.
EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_INVALID_INPUT = 2
EXIT_NUMERIC_FAILURE = 3
EXIT_CHECK_FAILURE = 4


def exit_code_for(exc):
    """Exit code for an exception raised out of a command."""
    if isinstance(exc, (InvalidInputError, ValidationError)):
        return EXIT_INVALID_INPUT
    if isinstance(exc, NumericFailureError):
        return EXIT_NUMERIC_FAILURE
    if isinstance(exc, CheckFailure):
        return EXIT_CHECK_FAILURE
    return EXIT_UNEXPECTED


def make_rng(seed):
    """The one generator every random draw in the package goes through.

    PCG64 seeded via SeedSequence: portable across platforms and numpy
    versions that keep the PCG64 stream stable.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def child_seed(seed, index):
    """Deterministic per-replication seed derived from (seed, index)."""
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return int(seq.generate_state(1, np.uint64)[0])


def file_digest(path):
    """sha256 of a file's bytes, hex encoded."""
    h = hashlib.sha256()
    with open(path, 'rb') as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b''):
            h.update(chunk)
    return h.hexdigest()

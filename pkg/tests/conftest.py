"""Shared pytest fixtures for the LOREC toolkit.

Everything here is seeded, so a failing test fails the same way on every run.
Models are kept small (p ≤ 20) to keep the default suite fast; the long
Monte-Carlo experiments live behind the ``slow`` marker.
"""
from datetime import date

import numpy as np
import pytest
from dateutil.relativedelta import relativedelta

from lorec.model_gen import gen_compound_symmetry, gen_factor, gen_spike, sample_gaussian
from lorec.portfolio import ReturnsPanel
from lorec.utils import make_rng


@pytest.fixture
def rng():
    return make_rng(20240601)


@pytest.fixture
def factor_model():
    return gen_factor(12, seed=7)


@pytest.fixture
def cs_model():
    return gen_compound_symmetry(10, seed=7)


@pytest.fixture
def spike_model():
    return gen_spike(8, seed=7)


@pytest.fixture
def factor_data(factor_model):
    """200 draws from the 12-dimensional factor model."""
    return sample_gaussian(factor_model, 200, seed=11)


@pytest.fixture
def make_psd():
    """Random well-conditioned p×p covariance: AAᵀ/p + I."""
    def _make(p, rng):
        a = rng.standard_normal((p, p))
        return (a @ a.T) / p + np.eye(p)
    return _make


@pytest.fixture
def make_panel():
    """Build a contiguous monthly ReturnsPanel from a covariance and a seed."""
    def _make(sigma, months, seed=0, start=date(1990, 1, 1), mean=None):
        sigma = np.asarray(sigma, dtype=float)
        p = sigma.shape[0]
        draws = sample_gaussian(sigma, months, seed)
        if mean is not None:
            draws = draws + np.asarray(mean)
        dates = [start + relativedelta(months=k) for k in range(months)]
        return ReturnsPanel(dates=dates, tickers=[f"A{j}" for j in range(p)], returns=draws)
    return _make


@pytest.fixture
def run_dir(tmp_path):
    path = tmp_path / "run"
    path.mkdir()
    return path

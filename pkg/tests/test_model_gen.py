"""Tests for the ground-truth generators and Gaussian sampling (lorec/model_gen.py)."""
import numpy as np
import pytest

from lorec import matrix_core as mc
from lorec import model_gen
from lorec.model_gen import (
    gen_compound_symmetry, gen_factor, gen_spike, generate, haar_orthonormal, sample_gaussian,
)
from lorec.utils import make_rng
from lorec.utils.errors import InvalidInputError, NumericFailureError


# ── shared invariants ───────────────────────────────────────────────────────
@pytest.mark.parametrize("family,p", [("factor", 12), ("compound_symmetry", 10), ("spike", 8)])
def test_every_family_is_a_positive_definite_sum(family, p):
    model = generate(family, p, seed=5)
    np.testing.assert_array_equal(model.sigma, model.low_rank + model.sparse)
    assert mc.spectral_factorize(model.sigma).eigenvalues[-1] > 0
    eigs = np.abs(mc.spectral_factorize(model.low_rank).eigenvalues)
    assert int(np.count_nonzero(eigs > 1e-8)) == model.true_rank


@pytest.mark.parametrize("family,p", [("factor", 12), ("compound_symmetry", 10), ("spike", 8)])
def test_generators_are_pure_functions_of_seed(family, p):
    a, b = generate(family, p, seed=9), generate(family, p, seed=9)
    assert np.array_equal(a.sigma, b.sigma)


def test_factor_seed_changes_loadings():
    assert not np.array_equal(gen_factor(12, seed=9).sigma, gen_factor(12, seed=10).sigma)


def test_unknown_family():
    with pytest.raises(InvalidInputError):
        generate("banded", 10, seed=0)


def test_generator_key_errors_are_not_reported_as_unknown_family(monkeypatch):
    def broken(p, seed):
        raise KeyError("spike_support")

    monkeypatch.setitem(model_gen.GENERATORS, "factor", broken)
    with pytest.raises(KeyError):
        generate("factor", 10, seed=0)


# ── factor ──────────────────────────────────────────────────────────────────
def test_factor_spectrum_and_trace(factor_model):
    eigs = mc.spectral_factorize(factor_model.sigma).eigenvalues
    np.testing.assert_allclose(eigs[:3], [9.0, 9.0, 9.0], atol=1e-10)
    np.testing.assert_allclose(eigs[3:], np.ones(9), atol=1e-10)
    assert np.trace(factor_model.sigma) == pytest.approx(12 + 24)


def test_factor_support_is_diagonal(factor_model):
    assert factor_model.true_rank == 3
    assert factor_model.true_support == frozenset((i, i) for i in range(12))


def test_factor_needs_p_at_least_4():
    with pytest.raises(InvalidInputError):
        gen_factor(3, seed=0)


def test_haar_columns_are_orthonormal():
    u = haar_orthonormal(20, 3, make_rng(1))
    np.testing.assert_allclose(u.T @ u, np.eye(3), atol=1e-12)


# ── compound symmetry ───────────────────────────────────────────────────────
def test_compound_symmetry_entries(cs_model):
    sigma = cs_model.sigma
    np.testing.assert_allclose(np.diag(sigma), np.ones(10))
    off = sigma[~np.eye(10, dtype=bool)]
    assert set(np.round(off, 12)) == {0.2, 0.6}
    assert cs_model.true_rank == 1
    assert len(cs_model.true_support) == 10 * 5


def test_compound_symmetry_permutation_preserves_spectrum():
    a = gen_compound_symmetry(15, seed=1)
    b = gen_compound_symmetry(15, seed=2)
    np.testing.assert_allclose(mc.spectral_factorize(a.sigma).eigenvalues,
                               mc.spectral_factorize(b.sigma).eigenvalues, atol=1e-10)


def test_compound_symmetry_divisibility():
    with pytest.raises(InvalidInputError):
        gen_compound_symmetry(12, seed=0)


# ── spike ───────────────────────────────────────────────────────────────────
def test_spike_structure(spike_model):
    u = np.array(spike_model.family_params["u"])
    assert np.linalg.norm(u) == pytest.approx(1.0)
    assert np.count_nonzero(u) == 4
    assert mc.spectral_factorize(spike_model.low_rank).eigenvalues[0] == pytest.approx(16.0)
    np.testing.assert_allclose(np.diag(spike_model.sparse), np.ones(8))
    assert spike_model.sparse[0, 1] == pytest.approx(0.4)


def test_spike_entry_magnitude_on_support():
    model = gen_spike(120, seed=3)
    support = model.family_params["spike_support"]
    block = np.abs(model.low_rank[np.ix_(support, support)])
    np.testing.assert_allclose(block, np.full_like(block, 16 / 60), atol=1e-12)


def test_spike_divisibility():
    with pytest.raises(InvalidInputError):
        gen_spike(10, seed=0)


# ── sampling ────────────────────────────────────────────────────────────────
def test_sample_is_deterministic(factor_model):
    a = sample_gaussian(factor_model, 50, seed=4)
    b = sample_gaussian(factor_model, 50, seed=4)
    assert np.array_equal(a, b)
    assert a.shape == (50, 12)


def test_sample_covariance_converges():
    model = gen_compound_symmetry(10, seed=2)
    n = 200_000
    data = sample_gaussian(model, n, seed=8)
    assert np.abs(mc.sample_covariance(data) - model.sigma).max() < 0.05
    assert np.all(np.abs(data.mean(axis=0)) < 4 * np.sqrt(np.diag(model.sigma)) / np.sqrt(n))


def test_sampling_rejects_indefinite_covariance():
    with pytest.raises(NumericFailureError):
        sample_gaussian(np.diag([1.0, -1.0]), 10, seed=0)

"""Tests for the LOREC objective, the accelerated solver and its optimality
checks (lorec/solver.py)."""
import logging

import numpy as np
import pytest

from lorec import matrix_core as mc
from lorec.models import SolverConfig
from lorec.solver import (
    Decomposition, complexity_bound, default_init, gradient, kkt_check, next_momentum, objective,
    proximal_step, rank_one_loading, solve,
)
from lorec.utils.errors import InvalidInputError


# ── objective and gradient ──────────────────────────────────────────────────
def test_objective_zero_start():
    z = np.zeros((2, 2))
    assert objective(z, z, np.eye(2), 0.3, 1.0) == pytest.approx(1.0)


def test_objective_exact_fit_pays_only_penalty():
    assert objective(np.eye(2), np.zeros((2, 2)), np.eye(2), 0.3, 1.0) == pytest.approx(0.6)


def test_objective_matches_term_by_term(rng):
    sigma = mc.symmetrize(rng.standard_normal((5, 5)))
    low = mc.symmetrize(rng.standard_normal((5, 5)))
    sparse = mc.symmetrize(rng.standard_normal((5, 5)))
    expected = (0.5 * mc.frobenius(low + sparse - sigma) ** 2
                + 0.4 * mc.norms(low).nuclear + 0.2 * mc.norms(sparse).elementwise_l1)
    assert objective(low, sparse, sigma, 0.4, 0.2) == pytest.approx(expected, rel=1e-12)


def test_objective_unpenalized_diagonal():
    sparse = np.diag([1.0, 2.0])
    z = np.zeros((2, 2))
    assert objective(z, sparse, sparse, 1.0, 1.0, penalize_diagonal=False) == pytest.approx(0.0)
    assert objective(z, sparse, sparse, 1.0, 1.0) == pytest.approx(3.0)


def test_objective_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        objective(np.zeros((2, 2)), np.zeros((3, 3)), np.eye(2), 1.0, 1.0)


def test_gradient_cases(rng):
    sigma = mc.symmetrize(rng.standard_normal((4, 4)))
    z = np.zeros((4, 4))
    np.testing.assert_array_equal(gradient(z, z, sigma), -sigma)
    np.testing.assert_allclose(gradient(sigma / 2, sigma / 2, sigma), z, atol=1e-15)


def test_gradient_matches_central_differences(rng):
    sigma = mc.symmetrize(rng.standard_normal((4, 4)))
    low = rng.standard_normal((4, 4))
    sparse = rng.standard_normal((4, 4))
    grad = gradient(low, sparse, sigma)
    h = 1e-6
    for _ in range(5):
        i, j = rng.integers(0, 4, size=2)
        bump = np.zeros((4, 4))
        bump[i, j] = h
        f_plus = objective(low + bump, sparse, sigma, 0.0, 0.0)
        f_minus = objective(low - bump, sparse, sigma, 0.0, 0.0)
        assert (f_plus - f_minus) / (2 * h) == pytest.approx(grad[i, j], abs=1e-6)


# ── config ──────────────────────────────────────────────────────────────────
def test_config_rejects_small_step_and_nonpositive_penalties():
    from pydantic import ValidationError

    with pytest.raises(ValidationError):
        SolverConfig(lam=1.0, rho=1.0, step_l=1.5)
    with pytest.raises(ValidationError):
        SolverConfig(lam=0.0, rho=1.0)
    with pytest.raises(ValidationError):
        SolverConfig(lam=1.0, rho=1.0, epsilon=0.0)


def test_config_accepts_lambda_alias():
    cfg = SolverConfig.model_validate({"lambda": 0.5, "rho": 0.1})
    assert cfg.lam == 0.5


# ── solve ───────────────────────────────────────────────────────────────────
def test_momentum_recurrence():
    alpha = [1.0]
    for _ in range(3):
        alpha.append(next_momentum(alpha[-1]))
    assert alpha[1] == pytest.approx((1 + np.sqrt(5)) / 2)
    assert alpha[2] == pytest.approx(2.193527, abs=1e-6)


def test_solve_heavy_penalty_collapses_to_zero():
    result = solve(np.eye(3), SolverConfig(lam=10.0, rho=10.0))
    assert result.converged
    assert result.estimate.rank == 0
    assert result.estimate.support == frozenset()
    np.testing.assert_allclose(result.estimate.total, np.zeros((3, 3)), atol=1e-12)


def test_solve_traces_and_momentum(factor_model):
    result = solve(factor_model.sigma, SolverConfig(lam=1.0, rho=0.2))
    assert len(result.objective_trace) == result.iterations
    assert len(result.momentum_trace) == result.iterations
    assert result.momentum_trace[0] == 1.0
    for a, b in zip(result.momentum_trace, result.momentum_trace[1:]):
        assert b == next_momentum(a)


def test_solve_starts_from_half_diagonal(factor_model):
    result = solve(factor_model.sigma, SolverConfig(lam=1.0, rho=0.2, max_iter=3))
    half = np.diag(np.diag(factor_model.sigma)) / 2
    np.testing.assert_array_equal(result.initial.low_rank, half)
    np.testing.assert_array_equal(result.initial.sparse, half)


def test_solve_iterates_exactly_symmetric(factor_model):
    result = solve(factor_model.sigma, SolverConfig(lam=1.0, rho=0.2))
    assert np.array_equal(result.estimate.low_rank, result.estimate.low_rank.T)
    assert np.array_equal(result.estimate.sparse, result.estimate.sparse.T)


def test_solve_is_deterministic(factor_model):
    cfg = SolverConfig(lam=1.0, rho=0.2)
    a = solve(factor_model.sigma, cfg)
    b = solve(factor_model.sigma, cfg)
    assert a.objective_trace == b.objective_trace
    assert np.array_equal(a.estimate.low_rank, b.estimate.low_rank)


def test_solve_max_iter_is_not_an_error(factor_model, caplog):
    with caplog.at_level(logging.WARNING, logger="lorec"):
        result = solve(factor_model.sigma, SolverConfig(lam=1.0, rho=0.2, max_iter=2))
    assert not result.converged
    assert result.iterations == 2
    assert "max_iter" in caplog.text


def test_solve_rejects_asymmetric_input():
    with pytest.raises(InvalidInputError):
        solve(np.array([[1.0, 0.5], [0.0, 1.0]]), SolverConfig(lam=1.0, rho=1.0))


def test_warm_start_reaches_same_point(factor_model):
    cfg = SolverConfig(lam=1.0, rho=0.2, epsilon=1e-9, max_iter=20000)
    cold = solve(factor_model.sigma, cfg)
    warm = solve(factor_model.sigma, cfg, init=cold.estimate)
    assert warm.iterations < cold.iterations
    np.testing.assert_allclose(warm.estimate.total, cold.estimate.total, atol=1e-5)


def test_proximal_step_is_separable(factor_model, rng):
    sigma = factor_model.sigma
    cfg = SolverConfig(lam=0.7, rho=0.3, step_l=3.0)
    y = mc.symmetrize(rng.standard_normal(sigma.shape))
    z = mc.symmetrize(rng.standard_normal(sigma.shape))
    low, sparse = proximal_step(y, z, sigma, cfg)
    grad = y + z - sigma
    step = 1.0 / 3.0
    low_alone, _ = mc.svd_soft_threshold(y - step * grad, 0.7 * step)
    sparse_alone = mc.soft_threshold_entrywise(z - step * grad, 0.3 * step)
    np.testing.assert_array_equal(low, low_alone)
    np.testing.assert_array_equal(sparse, sparse_alone)


# ── decomposition ───────────────────────────────────────────────────────────
def test_decomposition_rank_and_support_use_cutoff():
    low = np.diag([1.0, 5e-4, 0.0])
    sparse = np.array([[2e-3, 5e-4, 0.0], [5e-4, 0.0, 0.0], [0.0, 0.0, -1.0]])
    d = Decomposition(low, sparse)
    assert d.rank == 1
    assert d.support == frozenset({(0, 0), (2, 2)})


def test_decomposition_shape_mismatch():
    with pytest.raises(InvalidInputError):
        Decomposition(np.zeros((2, 2)), np.zeros((3, 3)))


def test_rank_one_loading_of_compound_symmetry(cs_model):
    u = rank_one_loading(Decomposition(cs_model.low_rank, cs_model.sparse))
    np.testing.assert_allclose(np.abs(u), np.full(10, 1 / np.sqrt(10)), atol=1e-10)


# ── optimality and complexity ───────────────────────────────────────────────
def test_kkt_scalar_minimizer_passes():
    # p=1, lambda < rho: the minimizer puts everything but lambda into L.
    d = Decomposition(np.array([[2.5]]), np.array([[0.0]]))
    report = kkt_check(d, np.array([[3.0]]), 0.5, 1.0, tol=1e-8)
    assert report.passed, report.violations


def test_kkt_perturbed_low_rank_fails_alignment():
    d = Decomposition(np.array([[2.6]]), np.array([[0.0]]))
    report = kkt_check(d, np.array([[3.0]]), 0.5, 1.0, tol=1e-3)
    assert not report.passed
    assert any(v.startswith("(b)") for v in report.violations)


def test_kkt_passes_on_converged_factor_solve():
    from lorec.model_gen import gen_factor

    sigma = gen_factor(40, seed=3).sigma
    result = solve(sigma, SolverConfig(lam=1.0, rho=0.2, epsilon=1e-8, max_iter=50000))
    assert result.converged
    report = kkt_check(result, sigma, 1.0, 0.2, tol=1e-3)
    assert report.passed, report.violations


def test_kkt_unpenalized_diagonal(factor_model):
    sigma = factor_model.sigma
    cfg = SolverConfig(lam=1.0, rho=0.2, epsilon=1e-8, max_iter=50000, penalize_diagonal=False)
    result = solve(sigma, cfg)
    report = kkt_check(result, sigma, 1.0, 0.2, tol=1e-3, penalize_diagonal=False)
    assert report.passed, report.violations


def test_complexity_bound_value_and_precondition():
    init = default_init(np.eye(2))
    optimum = Decomposition(np.zeros((2, 2)), np.zeros((2, 2)))
    # |L0|_F^2 + |S0|_F^2 = 0.5 + 0.5
    assert complexity_bound(1, init, optimum) == pytest.approx(8.0 * 1.0 / 4.0)
    with pytest.raises(InvalidInputError):
        complexity_bound(0, init, optimum)


def test_objective_gap_within_bound(rng, make_psd):
    sigma = make_psd(10, rng)
    lam, rho = 0.3 * mc.operator_norm(sigma), 0.2 * float(np.abs(sigma).max())
    reference = solve(sigma, SolverConfig(lam=lam, rho=rho, epsilon=1e-15, max_iter=10000))
    run = solve(sigma, SolverConfig(lam=lam, rho=rho, epsilon=1e-8, max_iter=10000))
    f_star = min(min(reference.objective_trace), min(run.objective_trace))
    for t, value in enumerate(run.objective_trace, start=1):
        assert value - f_star <= complexity_bound(t, run.initial, reference.estimate) + 1e-10

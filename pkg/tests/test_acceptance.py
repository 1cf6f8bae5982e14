"""Desk-scale Monte-Carlo experiments. Minutes each; run with `pytest -m slow`."""
import numpy as np
import pytest

from config import Config
from lorec import matrix_core as mc
from lorec.commands.simulate import run_replication
from lorec.estimators import estimate, spike_support_recovery
from lorec.metrics import aggregate, score
from lorec.model_gen import GroundTruthModel, gen_spike, haar_orthonormal, sample_gaussian
from lorec.models import EstimatorSpec
from lorec.portfolio import markowitz_weights, rolling_backtest
from lorec.tuning import default_grid, kfold_cv
from lorec.utils import child_seed, make_rng

pytestmark = pytest.mark.slow

REPS = 20
OPTIONS = {"epsilon": Config.EPSILON, "max_iter": Config.MAX_ITER, "step_l": Config.STEP_L,
           "penalize_diagonal": True}


def _simulate(family, p, n, kinds, seed=0):
    triples = []
    for r in range(REPS):
        triples.extend(run_replication(r, family, p, n, kinds, seed, Config.FOLDS, Config.GRID_SIZE, OPTIONS))
    return {kind: aggregate(rep for k, rep, _ in triples if k == kind) for kind in kinds}


# ── factor and compound-symmetry recovery ───────────────────────────────────
def test_factor_model_losses_and_rank():
    summary = _simulate("factor", 120, 100, ["lorec", "sample"])
    lorec, sample = summary["lorec"], summary["sample"]
    assert 4.4 <= lorec["spectral_loss"] <= 5.5
    assert lorec["spectral_loss"] < sample["spectral_loss"]
    assert lorec["frobenius_loss"] < sample["frobenius_loss"]
    assert lorec["rank_correct_pct"] >= 60.0
    assert lorec["pct_true_negative"] >= 99.0


def test_compound_symmetry_rank():
    summary = _simulate("compound_symmetry", 120, 100, ["lorec"])
    assert summary["lorec"]["rank_correct_pct"] >= 50.0


def test_cv_lorec_beats_sample_in_frobenius_loss():
    wins = 0
    for r in range(REPS):
        losses = {kind: rep.frobenius_loss
                  for kind, rep, _ in run_replication(r, "factor", 40, 100, ["lorec", "sample"], 3,
                                                      Config.FOLDS, Config.GRID_SIZE, OPTIONS)}
        wins += losses["lorec"] < losses["sample"]
    assert wins >= 18


# ── spiked model consistency ────────────────────────────────────────────────
def _spike_run(n, seed):
    model = gen_spike(40, seed)
    data = sample_gaussian(model, n, child_seed(seed, 0))
    grid = default_grid(mc.sample_covariance(data), "lorec_thresholded_input", num=6, n=n)
    spec = kfold_cv(data, grid, folds=5, estimator_kind="lorec_thresholded_input", seed=seed, **OPTIONS).best_spec
    fitted, decomposition = estimate(spec, data, **OPTIONS)
    return model, decomposition, score(fitted, decomposition, model)


def test_spike_rank_signs_and_support():
    hits = 0
    for seed in range(REPS):
        model, decomposition, report = _spike_run(20_000, seed)
        if report.rank_correct and report.sign_recovered:
            hits += 1
            recovered = spike_support_recovery(decomposition.low_rank, model.family_params["k"])
            assert recovered == set(model.family_params["spike_support"])
    assert hits >= 18


def test_spike_inverse_loss_rate():
    small = [_spike_run(5_000, seed)[2].inverse_spectral_loss for seed in range(REPS)]
    large = [_spike_run(20_000, seed)[2].inverse_spectral_loss for seed in range(REPS)]
    assert np.mean(large) <= np.mean(small) / 2


# ── backtest on synthetic returns ───────────────────────────────────────────
def _structured_covariance(p, seed):
    rng = make_rng(seed)
    u = haar_orthonormal(p, 2, rng)
    sparse = np.eye(p)
    for i in range(0, p - 1, 2):
        sparse[i, i + 1] = sparse[i + 1, i] = 0.3
    return GroundTruthModel(low_rank=mc.symmetrize((u * 6.0) @ u.T), sparse=sparse,
                            family="rank2_blocks", true_rank=2).sigma / 100


def test_lorec_portfolio_beats_sample_portfolio(make_panel):
    wins = 0
    for seed in range(REPS):
        sigma = _structured_covariance(20, seed)
        panel = make_panel(sigma, 240, seed=child_seed(seed, 1), mean=0.01)
        lorec = rolling_backtest(panel, "lorec", **OPTIONS)
        sample = rolling_backtest(panel, EstimatorSpec(kind="sample"), **OPTIONS)
        wins += lorec.pooled_variance <= sample.pooled_variance
    assert wins >= 15


def test_true_covariance_portfolio_beats_sample_portfolio(make_panel):
    wins = 0
    for seed in range(REPS):
        sigma = _structured_covariance(20, seed)
        panel = make_panel(sigma, 360, seed=child_seed(seed, 2), mean=0.01)
        sample = rolling_backtest(panel, EstimatorSpec(kind="sample"), **OPTIONS)
        years = panel.complete_years()
        held = np.concatenate([panel.returns[slice(*years[r.year])] for r in sample.years])
        oracle = held @ markowitz_weights(sigma).weights
        wins += np.var(oracle, ddof=1) <= sample.pooled_variance
    assert wins >= 15

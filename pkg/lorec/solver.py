# File: lorec/solver.py
# The LOREC objective and its accelerated proximal-gradient solver.
#
#   F(L, S) = ½|L + S − Σ|_F² + λ‖L‖_* + ρ|S|₁
#
# The smooth part has the same gradient in both blocks (L + S − Σ), and the
# two penalties act on separate blocks, so one proximal step splits into a
# singular-value soft-threshold for L and an entrywise soft-threshold for S.
# Consecutive (L, S) pairs are mixed with Nesterov momentum.

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from lorec import matrix_core as mc
from lorec.models import SolverConfig, SolverSummary
from lorec.utils.errors import InvalidInputError, NumericFailureError

logger = logging.getLogger(__name__)

# Magnitude above which a singular value / entry counts as nonzero when
# reporting rank and support (independent of the solver tolerance).
SUPPORT_CUTOFF = 1e-3


def _check_shapes(*mats):
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise InvalidInputError(f'expected square matrices, got shape {shape}')
    for m in mats[1:]:
        if m.shape != shape:
            raise InvalidInputError(f'dimension mismatch: {shape} vs {m.shape}')


def l1_penalty(s, penalize_diagonal=True):
    """|S|₁, or the off-diagonal sum when the diagonal is unpenalized."""
    total = float(np.abs(s).sum())
    if not penalize_diagonal:
        total -= float(np.abs(np.diag(s)).sum())
    return total


def objective(low_rank, sparse, sigma, lam, rho, penalize_diagonal=True):
    """F(L, S) for the given penalties."""
    low_rank, sparse, sigma = (np.asarray(m, dtype=np.float64) for m in (low_rank, sparse, sigma))
    _check_shapes(low_rank, sparse, sigma)
    residual = low_rank + sparse - sigma
    return (0.5 * float(np.sum(residual * residual))
            + lam * mc.nuclear_norm(low_rank)
            + rho * l1_penalty(sparse, penalize_diagonal))


def gradient(low_rank, sparse, sigma):
    """∇_L f = ∇_S f = L + S − Σ."""
    low_rank, sparse, sigma = (np.asarray(m, dtype=np.float64) for m in (low_rank, sparse, sigma))
    _check_shapes(low_rank, sparse, sigma)
    return low_rank + sparse - sigma


# ── results ──────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class Decomposition:
    """An (L, S) pair. Rank and support are always derived from the matrices."""
    low_rank: np.ndarray
    sparse: np.ndarray

    def __post_init__(self):
        if self.low_rank.shape != self.sparse.shape:
            raise InvalidInputError(
                f'low-rank and sparse parts differ in shape: {self.low_rank.shape} vs {self.sparse.shape}')

    @property
    def dim(self):
        return self.low_rank.shape[0]

    @property
    def rank(self):
        return int(np.count_nonzero(mc.singular_values(self.low_rank) > SUPPORT_CUTOFF))

    @property
    def support(self):
        rows, cols = np.nonzero(np.abs(self.sparse) > SUPPORT_CUTOFF)
        return frozenset(zip(rows.tolist(), cols.tolist()))

    @property
    def total(self):
        return self.low_rank + self.sparse


@dataclass(frozen=True, eq=False)
class SolverResult:
    estimate: Decomposition
    iterations: int
    objective_trace: list = field(default_factory=list)
    converged: bool = False
    momentum_trace: list = field(default_factory=list)
    initial: Decomposition = None
    config: SolverConfig = None

    def summary(self):
        return SolverSummary(
            lam=self.config.lam, rho=self.config.rho,
            iterations=self.iterations, converged=self.converged,
            objective_trace=list(self.objective_trace),
            rank=self.estimate.rank, support_size=len(self.estimate.support),
        )


# ── the algorithm ────────────────────────────────────────────────────────────
def default_init(sigma):
    """(diag(Σ)/2, diag(Σ)/2)."""
    half = np.diag(np.diag(sigma)) / 2.0
    return Decomposition(half.copy(), half.copy())


def next_momentum(alpha):
    return (1.0 + math.sqrt(1.0 + 4.0 * alpha * alpha)) / 2.0


def proximal_step(y, z, sigma, config):
    """One separable proximal-gradient step from the point (Y, Z)."""
    grad = y + z - sigma
    step = 1.0 / config.step_l
    low_rank, _ = mc.svd_soft_threshold(y - step * grad, config.lam * step)
    target = z - step * grad
    sparse = mc.soft_threshold_entrywise(target, config.rho * step)
    if not config.penalize_diagonal:
        np.fill_diagonal(sparse, np.diag(target))
    return low_rank, sparse


def _relative_change(new, old):
    return mc.frobenius(new - old) / (1.0 + mc.frobenius(old))


def solve(sigma, config, init=None):
    """Minimize F by accelerated proximal gradient.

    `init` defaults to diag(Σ)/2 in both blocks. Stops when the summed relative
    change of L and S drops to config.epsilon, or after config.max_iter
    iterations (converged=False, not an error).
    """
    sigma = mc.as_symmetric(sigma, 'sigma')
    if init is None:
        init = default_init(sigma)
    elif init.low_rank.shape != sigma.shape:
        raise InvalidInputError(f'warm start has shape {init.low_rank.shape}, sigma {sigma.shape}')

    prev_l, prev_s = init.low_rank, init.sparse
    y, z = prev_l, prev_s
    alpha = 1.0
    objective_trace, momentum_trace = [], []
    converged = False
    t = 0
    for t in range(1, config.max_iter + 1):
        low_rank, sparse = proximal_step(y, z, sigma, config)
        if not (np.all(np.isfinite(low_rank)) and np.all(np.isfinite(sparse))):
            raise NumericFailureError(f'non-finite iterate at iteration {t}')

        momentum_trace.append(alpha)
        alpha_next = next_momentum(alpha)
        mix = (alpha - 1.0) / alpha_next
        y = low_rank + mix * (low_rank - prev_l)
        z = sparse + mix * (sparse - prev_s)
        alpha = alpha_next

        objective_trace.append(objective(low_rank, sparse, sigma, config.lam, config.rho,
                                         config.penalize_diagonal))
        change = _relative_change(low_rank, prev_l) + _relative_change(sparse, prev_s)
        prev_l, prev_s = low_rank, sparse
        if t % 100 == 0:
            logger.debug('iteration %d: objective %.10g, change %.3g', t, objective_trace[-1], change)
        if change <= config.epsilon:
            converged = True
            break

    if not converged:
        logger.warning('solver stopped at max_iter=%d without reaching epsilon=%g',
                       config.max_iter, config.epsilon)
    return SolverResult(
        estimate=Decomposition(prev_l, prev_s),
        iterations=t,
        objective_trace=objective_trace,
        converged=converged,
        momentum_trace=momentum_trace,
        initial=init,
        config=config,
    )


def complexity_bound(t, init, optimum):
    """Accuracy bound after t iterations: 8(|L₀−L̂|_F² + |S₀−Ŝ|_F²)/(t+1)²."""
    if t < 1:
        raise InvalidInputError(f'iteration count must be at least 1, got {t}')
    distance = (mc.frobenius(init.low_rank - optimum.low_rank) ** 2
                + mc.frobenius(init.sparse - optimum.sparse) ** 2)
    return 8.0 * distance / (t + 1) ** 2


def rank_one_loading(decomposition):
    """Unit eigenvector of L̂ for its largest-magnitude eigenvalue.

    In a single-factor model this is the loading vector up to scale and sign.
    """
    fac = mc.spectral_factorize(decomposition.low_rank)
    return fac.eigenvectors[:, int(np.argmax(np.abs(fac.eigenvalues)))]


# ── optimality check ─────────────────────────────────────────────────────────
@dataclass
class KKTReport:
    passed: bool
    violations: list
    residual_operator_norm: float
    residual_max: float
    alignment_error: float
    sign_error: float


def kkt_check(result, sigma, lam, rho, tol=1e-3, penalize_diagonal=True, nonzero_tol=1e-8):
    """First-order optimality of (L̂, Ŝ), with R = Σ − L̂ − Ŝ:

    (a) ‖R‖₂ ≤ λ(1+tol)
    (b) on L̂'s nonzero singular directions, UᵀRV = λI to within tol·λ
    (c) |R|_max ≤ ρ(1+tol) over penalized entries
    (d) R_ij = ρ·sign(Ŝ_ij) to within tol·ρ wherever Ŝ_ij ≠ 0
    With an unpenalized diagonal, (c)/(d) become |R_ii| ≤ tol·ρ on the diagonal.
    """
    estimate = result.estimate if isinstance(result, SolverResult) else result
    sigma = mc.as_symmetric(sigma, 'sigma')
    low_rank, sparse = estimate.low_rank, estimate.sparse
    _check_shapes(low_rank, sparse, sigma)
    residual = sigma - low_rank - sparse
    violations = []

    op = mc.operator_norm(residual)
    if op > lam * (1 + tol):
        violations.append(f'(a) residual operator norm {op:.6g} exceeds lambda {lam:.6g}')

    fac = mc.spectral_factorize(mc.symmetrize(low_rank))
    scale = max(1.0, float(np.abs(fac.eigenvalues).max(initial=0.0)))
    keep = np.abs(fac.eigenvalues) > nonzero_tol * scale
    alignment = 0.0
    if np.any(keep):
        v = fac.eigenvectors[:, keep]
        u = v * np.sign(fac.eigenvalues[keep])
        projected = u.T @ residual @ v
        alignment = float(np.abs(projected - lam * np.eye(projected.shape[0])).max())
        if alignment > tol * lam:
            violations.append(f'(b) residual misaligned with the low-rank part by {alignment:.6g}')

    off = ~np.eye(residual.shape[0], dtype=bool) if not penalize_diagonal else np.ones_like(residual, dtype=bool)
    r_max = float(np.abs(residual[off]).max(initial=0.0))
    if r_max > rho * (1 + tol):
        violations.append(f'(c) residual max entry {r_max:.6g} exceeds rho {rho:.6g}')

    active = (sparse != 0) & off
    sign_err = 0.0
    if np.any(active):
        sign_err = float(np.abs(residual[active] - rho * np.sign(sparse[active])).max())
        if sign_err > tol * rho:
            violations.append(f'(d) residual differs from rho*sign(S) by {sign_err:.6g}')
    if not penalize_diagonal:
        diag_err = float(np.abs(np.diag(residual)).max())
        if diag_err > tol * rho:
            violations.append(f'(d) unpenalized diagonal residual {diag_err:.6g} is not zero')
        sign_err = max(sign_err, diag_err)

    return KKTReport(
        passed=not violations,
        violations=violations,
        residual_operator_norm=op,
        residual_max=r_max,
        alignment_error=alignment,
        sign_error=sign_err,
    )

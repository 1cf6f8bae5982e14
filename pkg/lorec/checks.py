# File: lorec/checks.py
# Oracle suites for the solver, run on seeded random instances:
#   kkt    first-order optimality of tightly converged solves
#   bound  objective gap against the O(1/t²) accuracy bound at every iteration
#   prox   closed-form proximal maps against a brute-force minimizer on 2×2 input
#          (singular-value and entrywise soft thresholding, hard thresholding)

import logging
from dataclasses import dataclass, field

import numpy as np

from lorec import matrix_core as mc
from lorec.models import SolverConfig
from lorec.solver import complexity_bound, kkt_check, solve
from lorec.utils import child_seed, make_rng
from lorec.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

SUITES = ('kkt', 'bound', 'prox')

KKT_INSTANCES = 20
KKT_DIM = 10
KKT_EPSILON = 1e-8
KKT_MAX_ITER = 100_000
KKT_TOL = 1e-3

BOUND_INSTANCES = 50
BOUND_DIMS = (10, 20, 40)
BOUND_REFERENCE_ITER = 10_000
BOUND_SLACK = 1e-10

PROX_INSTANCES = 20
PROX_SLACK = 1e-10
# Brute-force minimizer: an 11-point grid per coordinate, re-centred on the
# best point and shrunk after each of the levels.
GRID_POINTS = 11
GRID_LEVELS = 40
GRID_SHRINK = 0.5


@dataclass
class SuiteReport:
    suite: str
    instances: int = 0
    failures: list = field(default_factory=list)
    worst: float = 0.0   # largest violation measure seen

    @property
    def passed(self):
        return not self.failures


def random_instance(p, rng):
    """Random PSD covariance with penalties inside its active range."""
    a = rng.standard_normal((p, p))
    sigma = mc.symmetrize(a @ a.T / p + np.diag(rng.uniform(0.1, 1.0, p)))
    lam = rng.uniform(0.05, 0.5) * mc.operator_norm(sigma)
    rho = rng.uniform(0.05, 0.5) * float(np.abs(sigma).max())
    return sigma, lam, rho


# ── kkt ──────────────────────────────────────────────────────────────────────
def run_kkt(seed, instances=KKT_INSTANCES):
    report = SuiteReport('kkt')
    for i in range(instances):
        sigma, lam, rho = random_instance(KKT_DIM, make_rng(child_seed(seed, i)))
        config = SolverConfig(lam=lam, rho=rho, epsilon=KKT_EPSILON, max_iter=KKT_MAX_ITER)
        result = solve(sigma, config)
        kkt = kkt_check(result, sigma, lam, rho, tol=KKT_TOL)
        report.instances += 1
        report.worst = max(report.worst, kkt.alignment_error / lam, kkt.sign_error / rho)
        if not result.converged:
            report.failures.append(f'instance {i}: did not converge in {KKT_MAX_ITER} iterations')
        elif not kkt.passed:
            report.failures.append(f'instance {i}: ' + '; '.join(kkt.violations))
    return report


# ── bound ────────────────────────────────────────────────────────────────────
def run_bound(seed, instances=BOUND_INSTANCES):
    report = SuiteReport('bound')
    for i in range(instances):
        rng = make_rng(child_seed(seed, i))
        p = BOUND_DIMS[i % len(BOUND_DIMS)]
        sigma, lam, rho = random_instance(p, rng)
        reference = solve(sigma, SolverConfig(lam=lam, rho=rho, epsilon=1e-15,
                                              max_iter=BOUND_REFERENCE_ITER))
        run = solve(sigma, SolverConfig(lam=lam, rho=rho, epsilon=1e-8,
                                        max_iter=BOUND_REFERENCE_ITER))
        # The best objective found stands in for the (possibly non-unique) optimum.
        f_star = min(min(reference.objective_trace), min(run.objective_trace))
        optimum = reference.estimate
        report.instances += 1
        for t, value in enumerate(run.objective_trace, start=1):
            gap = value - f_star
            bound = complexity_bound(t, run.initial, optimum)
            report.worst = max(report.worst, gap - bound)
            if gap > bound + BOUND_SLACK:
                report.failures.append(
                    f'instance {i} (p={p}): gap {gap:.6g} exceeds bound {bound:.6g} at t={t}')
                break
    return report


# ── prox ─────────────────────────────────────────────────────────────────────
def _nuclear_2x2(batch):
    return np.linalg.svd(batch, compute_uv=False).sum(axis=-1)


def _l1(batch):
    return np.abs(batch).sum(axis=(-2, -1))


def prox_objective(x, m, penalty):
    """½|X − M|_F² + penalty(X) for one 2×2 X or a batch of them."""
    return 0.5 * ((x - m) ** 2).sum(axis=(-2, -1)) + penalty(x)


def grid_minimize(m, penalty):
    """Best 2×2 X for `prox_objective` found by a shrinking grid search.

    `penalty` maps a batch of 2×2 matrices to their (already scaled) penalty.
    """
    target = np.asarray(m, dtype=np.float64)
    center = target.ravel()
    radius = float(np.abs(center).max()) + 2.0
    axis = np.linspace(-1.0, 1.0, GRID_POINTS)
    offsets = np.stack(np.meshgrid(axis, axis, axis, axis, indexing='ij'), axis=-1).reshape(-1, 4)
    for _ in range(GRID_LEVELS):
        candidates = (center + radius * offsets).reshape(-1, 2, 2)
        values = prox_objective(candidates, target, penalty)
        center = candidates[int(np.argmin(values))].ravel()
        radius *= GRID_SHRINK
    return center.reshape(2, 2)


def run_prox(seed, instances=PROX_INSTANCES):
    """Each closed-form map must reach an objective no worse than the grid
    search finds. Axis-aligned grids stall at the kinks of the nuclear norm,
    so argmins are not compared."""
    report = SuiteReport('prox')
    for i in range(instances):
        rng = make_rng(child_seed(seed, i))
        m = rng.standard_normal((2, 2))
        if i % 2:
            m = mc.symmetrize(m)
        tau = float(rng.uniform(0.1, 1.0))
        cases = (
            ('singular-value', mc.svd_soft_threshold(m, tau)[0], lambda b: tau * _nuclear_2x2(b)),
            ('entrywise', mc.soft_threshold_entrywise(m, tau), lambda b: tau * _l1(b)),
            ('hard-threshold', mc.hard_threshold(m, tau),
             lambda b: mc.hard_threshold_penalty(b, tau).sum(axis=(-2, -1))),
        )
        report.instances += 1
        for name, closed_form, penalty in cases:
            excess = float(prox_objective(closed_form, m, penalty)
                           - prox_objective(grid_minimize(m, penalty), m, penalty))
            report.worst = max(report.worst, excess)
            if excess > PROX_SLACK:
                report.failures.append(f'instance {i}: {name} prox exceeds the grid minimum by {excess:.3g}')
    return report


RUNNERS = {'kkt': run_kkt, 'bound': run_bound, 'prox': run_prox}


def run_suite(name, seed=0, instances=None):
    """Run one suite; returns a SuiteReport (never raises on a failed check)."""
    if name not in RUNNERS:
        raise InvalidInputError(f'unknown check suite {name!r}; choose from {SUITES}')
    kwargs = {} if instances is None else {'instances': instances}
    report = RUNNERS[name](seed, **kwargs)
    logger.info('check %s: %d instance(s), %d failure(s), worst %.3g',
                name, report.instances, len(report.failures), report.worst)
    return report

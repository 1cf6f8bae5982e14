# File: lorec/models/__init__.py
# Boundary schemas (pydantic). They validate/normalise every user-supplied parameter
# bundle and every JSON artifact at the edge.

from lorec.models.solver import SolverConfig, SolverSummary
from lorec.models.estimator import ESTIMATOR_KINDS, EstimatorSpec
from lorec.models.tuning import CoherenceParams, PenaltyGrid
from lorec.models.report import RecoveryReport
from lorec.models.manifest import RunManifest
from lorec.models.backtest import BacktestSummary, YearSummary

__all__ = [
    'SolverConfig', 'SolverSummary',
    'ESTIMATOR_KINDS', 'EstimatorSpec',
    'CoherenceParams', 'PenaltyGrid',
    'RecoveryReport',
    'RunManifest',
    'BacktestSummary', 'YearSummary',
]

# File: lorec/models/report.py
# One replication's losses and structure-recovery scores for one estimator.

from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat

Percent = Annotated[float, Field(ge=0.0, le=100.0)]


class RecoveryReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    spectral_loss: NonNegativeFloat
    frobenius_loss: NonNegativeFloat
    max_loss: NonNegativeFloat
    eigen_distance: NonNegativeFloat

    # Structure recovery. Empty for estimators that do not decompose.
    rank_estimated: Optional[int] = None
    rank_correct: Optional[bool] = None
    pct_true_positive: Optional[Percent] = None
    pct_true_negative: Optional[Percent] = None
    sign_recovered: Optional[bool] = None
    low_rank_spectral_loss: Optional[NonNegativeFloat] = None
    sparse_max_loss: Optional[NonNegativeFloat] = None
    joint_frobenius: Optional[NonNegativeFloat] = None

    # Empty when either matrix is not safely invertible.
    inverse_spectral_loss: Optional[NonNegativeFloat] = None
    inverse_frobenius_loss: Optional[NonNegativeFloat] = None

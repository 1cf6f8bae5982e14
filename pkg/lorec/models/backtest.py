# File: lorec/models/backtest.py
# backtest.json: the rolling minimum-variance backtest record.

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class YearSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    year: int
    params: dict[str, float] = Field(default_factory=dict)
    monthly_returns: list[float]
    mean: float
    variance: float
    rank: Optional[int] = None
    loading: Optional[list[float]] = None


class BacktestSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    estimator: str
    q: Optional[float] = None
    window_months: int
    tuning_lookback_years: int
    tickers: list[str]
    years: list[YearSummary]
    mean_return: float
    mean_return_se: float
    variance: float
    variance_se: float
    pooled_variance: float

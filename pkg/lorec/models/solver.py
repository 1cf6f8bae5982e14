# File: lorec/models/solver.py
# Solver settings and the JSON shape of a solve's result.
#
# `lambda` is a Python keyword, so the field is `lam` with the alias `lambda`:
# JSON and **kwargs from parsed files use `lambda`, code uses `lam=`.

from pydantic import BaseModel, ConfigDict, Field


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True, extra='forbid')

    lam: float = Field(gt=0, alias='lambda')   # nuclear-norm weight
    rho: float = Field(gt=0)                   # l1 weight
    # Fixed step constant; the gradient of the smooth part is 2-Lipschitz, so
    # anything below 2 loses the convergence guarantee.
    step_l: float = Field(default=2.0, ge=2.0)
    epsilon: float = Field(default=1e-4, gt=0)
    max_iter: int = Field(default=5000, ge=1)
    penalize_diagonal: bool = True


class SolverSummary(BaseModel):
    """result.json written next to L.csv / S.csv."""
    model_config = ConfigDict(populate_by_name=True)

    lam: float = Field(alias='lambda')
    rho: float
    iterations: int
    converged: bool
    objective_trace: list[float]
    rank: int
    support_size: int

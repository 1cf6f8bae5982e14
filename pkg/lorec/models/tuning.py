# File: lorec/models/tuning.py
# Penalty grids for cross-validation and the coherence constants of the
# identifiability theory.

from itertools import product

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from lorec.models.estimator import REQUIRED_PARAMS
from lorec.utils.errors import InvalidInputError

_GRID_FIELDS = {
    'lambda': 'lambda_values',
    'rho': 'rho_values',
    'tau': 'tau_values',
    'w': 'w_values',
}


class PenaltyGrid(BaseModel):
    """Candidate values per parameter. Lists are stored sorted ascending, so the
    order a caller lists them in never matters. An empty grid is the single
    parameterless point of `sample`; kinds with parameters reject it in
    `points`."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    lambda_values: list[float] = Field(default_factory=list)
    rho_values: list[float] = Field(default_factory=list)
    tau_values: list[float] = Field(default_factory=list)
    w_values: list[float] = Field(default_factory=list)

    @field_validator('lambda_values', 'rho_values')
    @classmethod
    def _positive_sorted(cls, v):
        if any(not x > 0 for x in v):
            raise ValueError('penalty values must be strictly positive')
        return sorted(v)

    @field_validator('tau_values')
    @classmethod
    def _nonneg_sorted(cls, v):
        if any(not x >= 0 for x in v):
            raise ValueError('threshold values must be nonnegative')
        return sorted(v)

    @field_validator('w_values')
    @classmethod
    def _unit_sorted(cls, v):
        if any(not 0.0 <= x <= 1.0 for x in v):
            raise ValueError('shrinkage weights must lie in [0, 1]')
        return sorted(v)

    def points(self, kind):
        """Every parameter combination for `kind`, as dicts, in grid order."""
        keys = REQUIRED_PARAMS[kind]
        if not keys:
            return [{}]
        axes = []
        for key in keys:
            values = getattr(self, _GRID_FIELDS[key])
            if not values:
                raise InvalidInputError(f'grid has no {key} values, which {kind} needs')
            axes.append(values)
        return [dict(zip(keys, combo)) for combo in product(*axes)]


class CoherenceParams(BaseModel):
    """ξ(T), μ(Ω) and the ratio γ = ρ/λ.

    Identifiability wants γ ∈ [9ξ, 1/(6μ)]; enforced only when that interval is
    nonempty.
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    xi: float = Field(gt=0)
    mu: float = Field(gt=0)
    gamma: float = Field(gt=0)

    @property
    def gamma_interval(self):
        return 9.0 * self.xi, 1.0 / (6.0 * self.mu)

    @model_validator(mode='after')
    def _gamma_in_range(self):
        lo, hi = self.gamma_interval
        if lo <= hi and not lo <= self.gamma <= hi:
            raise ValueError(f'gamma must lie in [{lo:.6g}, {hi:.6g}], got {self.gamma}')
        return self

# File: lorec/models/estimator.py
# Which estimator to run and with which parameters. Round-trips through JSON as
# {"kind": "...", "params": {...}}.

from typing import Literal, get_args

from pydantic import BaseModel, ConfigDict, Field, model_validator

EstimatorKind = Literal[
    'lorec', 'lorec_thresholded_input', 'sample', 'hard_threshold', 'shrink_to_identity',
]
ESTIMATOR_KINDS = get_args(EstimatorKind)

# Parameters each kind requires, in the canonical order used by grids and
# tie-breaking.
REQUIRED_PARAMS = {
    'lorec': ('lambda', 'rho'),
    'lorec_thresholded_input': ('tau', 'lambda', 'rho'),
    'sample': (),
    'hard_threshold': ('tau',),
    'shrink_to_identity': ('w',),
}


class EstimatorSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: EstimatorKind
    params: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode='after')
    def _check_params(self):
        required = REQUIRED_PARAMS[self.kind]
        missing = [k for k in required if k not in self.params]
        if missing:
            raise ValueError(f'{self.kind} requires parameters {missing}')
        unknown = sorted(set(self.params) - set(required))
        if unknown:
            raise ValueError(f'{self.kind} does not take parameters {unknown}')
        for key in ('lambda', 'rho'):
            if key in self.params and not self.params[key] > 0:
                raise ValueError(f'{key} must be positive, got {self.params[key]}')
        if 'tau' in self.params and not self.params['tau'] >= 0:
            raise ValueError(f"tau must be nonnegative, got {self.params['tau']}")
        if 'w' in self.params and not 0.0 <= self.params['w'] <= 1.0:
            raise ValueError(f"shrinkage weight w must lie in [0, 1], got {self.params['w']}")
        return self

    def label(self):
        """Short human-readable name, e.g. 'lorec(lambda=0.5,rho=0.1)'."""
        if not self.params:
            return self.kind
        inner = ','.join(f'{k}={self.params[k]:.6g}' for k in REQUIRED_PARAMS[self.kind])
        return f'{self.kind}({inner})'

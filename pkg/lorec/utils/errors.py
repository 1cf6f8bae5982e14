# File: lorec/utils/errors.py
# Error vocabulary shared by every module. The CLI turns these into exit codes
# (see lorec.utils.exit_code_for); library code only raises them.


class LorecError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidInputError(LorecError, ValueError):
    """Bad arguments or malformed input data."""


class PreconditionError(InvalidInputError):
    """Input is well-formed but violates an operation's precondition."""


class RegimeError(InvalidInputError):
    """A formula was asked for outside the sample-size regime it covers."""


class InsufficientHistoryError(InvalidInputError):
    """A returns panel is too short for the requested backtest."""


class NumericFailureError(LorecError, ArithmeticError):
    """Numerical breakdown: NaNs, non-convergent eigensolver, non-PD input."""


class SingularMatrixError(NumericFailureError):
    """Matrix is (numerically) singular. Carries the offending eigenvalue."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class DegenerateConstraintError(NumericFailureError):
    """The return constraint cannot be met (mu is parallel to the ones vector)."""


class CheckFailure(LorecError):
    """An oracle suite found at least one violation."""

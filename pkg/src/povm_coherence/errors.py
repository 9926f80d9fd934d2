"""Exception hierarchy shared by the package.

Every exception carries a short, stable ``code`` so that front ends can
report failures in a machine-readable way.
"""


class CoherenceError(Exception):
    code = "E_GENERIC"


class ValidationError(CoherenceError, ValueError):
    code = "E_VALIDATION"


class NotPSDError(ValidationError):
    code = "E_NOT_PSD"


class DimensionMismatchError(ValidationError):
    code = "E_DIMENSION"


class OutcomeUnreachableError(ValidationError):
    code = "E_UNREACHABLE_OUTCOME"


class FixtureError(CoherenceError):
    code = "E_FIXTURE"


class OptimizerError(CoherenceError, RuntimeError):
    code = "E_OPTIMIZER"

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class NumericalInconsistencyError(CoherenceError, ArithmeticError):
    code = "E_NUMERICAL"

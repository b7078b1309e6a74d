"""
Exception hierarchy for the solver

Every error carries the process exit code the CLI reports and a structured
detail mapping, the way API errors carry a status code and a detail payload.
"""
from typing import Any, Dict


class PersuasionError(Exception):
    exit_code = 3

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail: Dict[str, Any] = detail

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, "detail": self.detail}


class InputError(PersuasionError):
    """Invalid input: problem files, beliefs, queries"""
    exit_code = 2


class SolverError(PersuasionError):
    """Numerical failure inside a solver"""
    exit_code = 3


class ProblemFileError(InputError):
    pass


class BeliefError(InputError):
    pass


class DimensionMismatchError(InputError):
    pass


class HullError(InputError):
    pass


class PriorNotRepresentableError(InputError):
    pass


class LatticeCapError(InputError):
    pass


class ContinuityError(InputError):
    pass


class VerifierCapError(InputError):
    pass


class OrderViolationError(InputError):
    pass


class UnsupportedStatesError(InputError):
    pass


class LpIterationLimitError(SolverError):
    pass


class CliqueCapError(SolverError):
    pass


class InconsistencyError(SolverError):
    pass

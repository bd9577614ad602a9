"""Exception hierarchy."""

from __future__ import annotations


class RocketBVPError(Exception):
    """Base class for all package errors."""


class InvalidScenarioError(RocketBVPError, ValueError):
    """Scenario or profile violates a physical or numerical invariant."""


class DomainError(RocketBVPError, ValueError):
    """Argument outside the domain of a function."""


class ShapeError(RocketBVPError, ValueError):
    """Grid functions live on incompatible grids."""


class SolverError(RocketBVPError, RuntimeError):
    """Iteration failed; ``report`` holds the partial history."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DivergenceError(SolverError):
    pass


class NonConvergenceError(SolverError):
    pass


class IntegrationError(RocketBVPError, RuntimeError):
    def __init__(self, message, blowup_time=None):
        super().__init__(message)
        self.blowup_time = blowup_time


class NoBracketError(RocketBVPError, RuntimeError):
    """Shooting found no sign change of the miss function."""


class OracleFailureError(RocketBVPError, RuntimeError):
    pass

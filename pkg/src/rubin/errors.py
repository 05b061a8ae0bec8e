"""Exception types raised by the rubin package."""


class RubinError(Exception):
    """Base class for all package errors."""


class DomainError(RubinError, ValueError):
    """A parameter or argument lies outside the domain of a formula."""


class NumericalDegeneracyError(RubinError, ArithmeticError):
    """An eigen- or root-problem is too degenerate to be resolved reliably."""


class StabilityError(RubinError):
    """Stationary-window samples disagree by more than the allowed spread."""

    def __init__(self, message, spread=None):
        super().__init__(message)
        self.spread = spread


class BracketError(RubinError, ValueError):
    """A bisection bracket does not enclose a sign change."""


class ToleranceError(RubinError):
    """A numerical procedure did not reach the requested tolerance."""

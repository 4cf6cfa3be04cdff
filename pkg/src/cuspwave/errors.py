"""Exception hierarchy shared across the toolkit."""


class CuspwaveError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(CuspwaveError):
    """Invalid parameters (bad Kummer pair, m1 == m2, unsupported m/n, ...)."""


class AccuracyError(CuspwaveError):
    """A numerical routine failed to reach its accuracy target.

    Carries the partial value and the number of terms/steps consumed so
    callers can diagnose near-misses.
    """

    def __init__(self, message, partial=None, terms=None):
        super().__init__(message)
        self.partial = partial
        self.terms = terms


class DomainError(CuspwaveError):
    """Input outside the operation's domain (t < 0, wrong dimension, ...)."""


class GridMismatchError(CuspwaveError):
    """Fields on incompatible grids were combined."""


class QuadratureError(CuspwaveError):
    """Time grid unsuitable for the requested quadrature rule."""


class ConvergenceError(CuspwaveError):
    """Iteration failed to converge; carries the report when available."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(CuspwaveError):
    """DSL syntax error with position information."""

    def __init__(self, message, line=None, column=None, expected=None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.expected = expected or []

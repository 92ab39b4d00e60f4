"""Exception types shared across the package.

Every numerical failure mode gets its own class so callers (and the service
layer) can map them to structured error responses instead of parsing
messages.
"""


class YdtraceError(Exception):
    """Base class for all package errors."""


class PoleError(YdtraceError):
    """Evaluation requested exactly at (or too close to) a pole."""

    def __init__(self, location, message=None):
        self.location = location
        super().__init__(message or f"argument at or near pole: {location}")


class ZeroError(YdtraceError):
    """A gamma ratio is exactly zero because the denominator sits on a pole."""

    def __init__(self, location):
        self.location = location
        super().__init__(f"denominator gamma at pole {location}; ratio is exactly 0")


class DomainError(YdtraceError):
    """No evaluation path converges for the given arguments."""


class ConstraintError(YdtraceError):
    """Barnes moment constraint violated."""

    def __init__(self, q, lhs, rhs):
        self.q = q
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"moment constraint q={q} violated: {lhs} != {rhs}")


class LatticeZeroError(YdtraceError):
    """A product factor vanishes at a lattice point."""

    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"factor vanishes at lattice point {point}")


class ConditionError(YdtraceError):
    """Charge balance (N-M)/2 = n-m violated; the trace vanishes identically."""


class NeutralityError(YdtraceError):
    """Operator product is not neutral; the trace ratio diverges."""


class UnreducedError(YdtraceError):
    """Operator product still contains mu-minus / phi-plus factors."""


class SeparationError(YdtraceError):
    """A vertical line does not separate the declared pole sets."""

    def __init__(self, pole, message=None):
        self.pole = pole
        super().__init__(message or f"contour does not separate pole {pole}")


class DecayError(YdtraceError):
    """Integrand does not decay along the contour; principal value needed."""


class NonconvergenceError(YdtraceError):
    """Extrapolation failed to stabilise."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class SlowDecayError(YdtraceError):
    """Residue ladder terms decay too slowly for acceleration."""


class NotSimpleTailError(YdtraceError):
    """Integrand tail at infinity is not c0 + c1/v + O(1/v^2)."""


class ContourConstructionError(YdtraceError):
    """No admissible contour exists for the given pole configuration."""


class AgreementError(YdtraceError):
    """Two independent evaluation routes disagree beyond tolerance."""

    def __init__(self, message, value_a=None, value_b=None):
        self.value_a = value_a
        self.value_b = value_b
        super().__init__(message)


class OrderingError(YdtraceError):
    """Branch points not strictly ordered."""


class UnknownFormulaError(YdtraceError):
    """Formula id not present in the registry."""


class UnknownSuiteError(YdtraceError):
    """Verification suite name not recognised."""

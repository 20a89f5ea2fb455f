"""
Exception hierarchy for the coalescing-flow toolkit

Library code raises these; only the CLI turns them into exit codes.
"""


class CoalesceError(Exception):
    """Base class for all toolkit errors"""


class DomainError(CoalesceError, ValueError):
    """Argument outside the mathematical domain (t <= 0, h <= 0, b < a, ...)"""


class TruncationError(CoalesceError, ValueError):
    """Lattice-series truncation cannot meet the requested tolerance"""


class NumericalConsistencyError(CoalesceError, ArithmeticError):
    """A quantity that must be nonnegative or finite came out otherwise"""


class ConfigError(CoalesceError, ValueError):
    """A configuration invariant is violated; the message names the constraint"""


class SizeGuardError(CoalesceError, ValueError):
    """Enumeration over atom tuples would exceed the size guard"""


class WindowError(CoalesceError, ValueError):
    """Requested block or range is not covered by the observation window"""


class KernelConsistencyError(CoalesceError, ArithmeticError):
    """Discretized covariance has an eigenvalue below the allowed floor"""


class SamplingError(CoalesceError, ArithmeticError):
    """Covariance factorisation failed while sampling"""


class UnsupportedOrderError(CoalesceError, ValueError):
    """Requested order is beyond what the calculus implements"""


class BasisResolutionError(CoalesceError, ValueError):
    """Projection of a function onto a finite basis leaves too large a residual"""


class InternalError(CoalesceError, RuntimeError):
    """An identity guaranteed by theory failed; indicates a bug"""

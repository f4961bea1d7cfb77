"""Exception taxonomy for the whole package.

Every failure a caller can act on gets its own class; the CLI maps the
usage-shaped ones to exit code 2 and the numerical ones to exit code 3.
"""


class UgwError(Exception):
    """Base class for all package-specific errors."""


class ParseError(UgwError, ValueError):
    """A distribution or model string could not be parsed."""


class DomainError(UgwError, ValueError):
    """An argument lies outside the documented domain."""


class InvalidPmf(UgwError, ValueError):
    """Finite pmf weights are negative or do not sum to one."""


class ZeroMean(UgwError, ValueError):
    """Size-biasing was requested for a law with mean zero."""


class Degenerate(UgwError, ValueError):
    """Operation undefined when all mass sits on degrees zero and one."""


class ChildrenCapExceeded(UgwError, RuntimeError):
    """A single draw asked for more than the per-draw children cap."""


class NoConvergence(UgwError, RuntimeError):
    """An iteration exhausted its budget without stabilising."""


class PoolNotConverged(UgwError, RuntimeError):
    """A population was handed to an estimator before it stabilised."""


class DegreeExceedsN(UgwError, ValueError):
    """A sampled degree is incompatible with the requested graph size."""


class CapExceeded(UgwError, ValueError):
    """Dense eigendecomposition was requested above the size cap."""


class NumericalError(UgwError, RuntimeError):
    """An internal self-check failed; results would be untrustworthy."""

"""Exception hierarchy shared across the package.

The split matters for the command line front end: configuration problems
exit with code 2, numerical failures (non-convergence, divergent integrals)
with code 3, and ordinary check failures with code 1.
"""


class SgspecError(Exception):
    """Base class for all package errors."""


class ConfigError(SgspecError):
    """Invalid configuration, input file, or parameter set."""


class CatalogError(ConfigError):
    """Unknown catalog identifier or invalid catalog parameters."""


class DimensionMismatchError(SgspecError):
    """Operands with incompatible dimensions."""


class NumericalError(SgspecError):
    """A numerical procedure could not produce a trustworthy result."""


class ConvergenceError(NumericalError):
    """An iteration or quadrature did not reach its target accuracy."""


class DivergenceError(NumericalError):
    """An improper integral does not converge for the given parameters."""


class OverflowBoundError(NumericalError):
    """Requested matrix exponential exceeds the configured norm bound."""


class PeriodError(SgspecError):
    """Period-detection precondition violated (t0 is not a period)."""

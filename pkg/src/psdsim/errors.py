"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so library code should
raise the most specific class that applies.
"""


class PsdSimError(Exception):
    """Base class for all package errors."""


class ParseError(PsdSimError):
    """Malformed input text (matrix files, divergence spec strings)."""


class DomainError(PsdSimError, ValueError):
    """Input outside the mathematical domain of an operation."""


class OptimizerError(PsdSimError):
    """An iterative solver failed to produce a usable result."""

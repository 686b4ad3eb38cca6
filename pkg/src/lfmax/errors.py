"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: config errors -> 2, domain/numerical
errors -> 3, integrity errors -> 4.
"""


class LfmaxError(Exception):
    """Base class for all package errors."""


class DomainError(LfmaxError, ValueError):
    """Input outside an operation's mathematical domain."""


class ResourceError(LfmaxError, RuntimeError):
    """Request exceeds a desk-scale resource cap."""


class FormatError(LfmaxError, ValueError):
    """Malformed input file."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class IntegrityError(LfmaxError, RuntimeError):
    """A cross-check on computed data failed (e.g. a missed zero)."""


class NumericalError(LfmaxError, RuntimeError):
    """An iterative numerical procedure failed to converge."""


class ConfigError(LfmaxError, ValueError):
    """Bad run configuration (unknown key, unparsable value)."""

"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to.
"""


class ZvSeqError(Exception):
    exit_code = 1


class ParameterError(ZvSeqError, ValueError):
    """An argument violates a documented precondition."""

    exit_code = 1


class UnsupportedRegimeError(ParameterError):
    """The parameters fall outside the range where a closed form is exact."""


class ConfigurationError(ParameterError):
    """An experiment configuration cannot be satisfied."""


class InvariantViolation(ZvSeqError, AssertionError):
    """A proven property failed to hold; indicates a bug or a false claim."""

    exit_code = 2


class ResourceCapError(ZvSeqError):
    """A requested enumeration exceeds its configured size cap."""

    exit_code = 3

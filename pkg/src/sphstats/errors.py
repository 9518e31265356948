"""Exception types shared across the library and mapped to CLI exit codes."""


class SphstatsError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParseError(SphstatsError):
    """Malformed input file, row, or configuration."""

    exit_code = 2

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateDataError(SphstatsError):
    """Sample is degenerate for the requested operation (R-bar of 0 or 1)."""

    exit_code = 3


class ConvergenceError(SphstatsError):
    """A numerical routine failed to reach its tolerance."""

    exit_code = 4


class MissingDataError(SphstatsError):
    """A bundled data file is absent or fails its checksum."""

    exit_code = 5

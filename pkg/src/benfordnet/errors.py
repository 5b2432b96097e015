"""Exception hierarchy shared by the library and the command line."""


class BenfordError(Exception):
    """Base class for every error raised by benfordnet."""


class UsageError(BenfordError, ValueError):
    """Invalid arguments: bad base, unknown format, mismatched reports."""


class DataError(BenfordError, ValueError):
    """Input data that cannot be analysed (negative counts, bad cells)."""

    def __init__(self, message, line=None, index=None):
        self.line = line
        self.index = index
        where = []
        if line is not None:
            where.append(f"line {line}")
        if index is not None:
            where.append(f"index {index}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class SchemaError(DataError):
    """A declared metric column is missing from the input."""


class EmptyHistogramError(DataError):
    """No value contributed a digit, so no distribution can be formed."""

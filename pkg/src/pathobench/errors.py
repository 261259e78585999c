"""Exception types shared across the package.

The CLI maps these onto exit codes: parse/backend failures exit 1,
validation failures exit 2.
"""


class PathobenchError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PathobenchError, ValueError):
    """Invalid input: bad buffer shape, out-of-range parameter, bad config."""


class BackendError(PathobenchError, RuntimeError):
    """An underlying codec or I/O backend failed (e.g. JPEG encode)."""


class ParseError(PathobenchError, ValueError):
    """A structured input file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class DataError(PathobenchError, ValueError):
    """Metric input cannot support the requested computation."""


class InsufficientDataError(DataError):
    """An aggregation was asked for on an empty record set."""


class IncompleteMatrixError(DataError):
    """The error matrix is missing one or more (kind, severity) cells."""

    def __init__(self, missing):
        self.missing = sorted(missing)
        cells = ", ".join(f"({k}, {s})" for k, s in self.missing)
        super().__init__(f"error matrix missing cells: {cells}")


class MissingBaselineError(DataError):
    """No clean (severity-0) records were supplied."""


class UndefinedMetricError(DataError):
    """The metric is undefined for this input (zero denominator/variance)."""

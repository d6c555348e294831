"""Exception hierarchy shared by every module of the package."""


class CsstError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidParameter(CsstError, ValueError):
    pass


class DimensionMismatch(CsstError, ValueError):
    pass


class DegenerateData(CsstError, ValueError):
    pass


class DegeneratePair(CsstError, ValueError):
    pass


class GridTooSmall(CsstError, ValueError):
    pass


class EmptySupport(CsstError):
    """No input vector survived the positive-cosine filter for a region pair."""


class LowSupport(CsstError):
    """Fewer filtered input vectors than the configured minimum."""

    def __init__(self, n_d: int, min_support: int):
        super().__init__(f"only {n_d} projected vectors, need at least {min_support}")
        self.n_d = n_d
        self.min_support = min_support


class ParseError(CsstError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class RaggedRow(ParseError, DimensionMismatch):
    """A CSV row whose field count differs from the header."""


class SchemaError(CsstError, ValueError):
    pass

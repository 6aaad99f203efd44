"""Exception types raised across the package."""


class RangeError(ValueError):
    """An index or code falls outside its representable range."""


class ParseError(ValueError):
    """Malformed input text. ``lineno`` is 1-based when known."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class FormatError(ValueError):
    """A file parsed but its content is inconsistent with the format."""


class BoundaryNotClosedError(ValueError):
    """A ray crossed a volume boundary an odd number of times."""

    def __init__(self, message="boundary is not closed"):
        super().__init__(message)


class UnsupportedError(RuntimeError):
    """The requested quantity needs incidence data the complex does not carry."""

"""Exception types shared across the package."""


class BalsqError(Exception):
    """Base class for all errors raised by balsq."""


class NotColorSquarefreeError(BalsqError, ValueError):
    """A monomial was required to be color-squarefree but is not."""


class PreconditionError(BalsqError, ValueError):
    """An operation was called on input outside its domain."""


class ParseError(BalsqError, ValueError):
    """Malformed monomial text or input file."""


class ResourceLimitError(BalsqError, RuntimeError):
    """A configured resource cap (enumeration size, matrix size, memo entries) was exceeded."""

"""Exception hierarchy shared by every module."""


class PolyRamseyError(Exception):
    pass


class MalformedInputError(PolyRamseyError, ValueError):
    """Input data violates a structural invariant (bad pair list, bound violation...)."""


class PreconditionError(PolyRamseyError, ValueError):
    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class WindowUnsatisfiableError(PreconditionError):
    def __init__(self, message, checked=()):
        super().__init__(message)
        self.checked = tuple(checked)


class BoundOverflowError(PolyRamseyError, OverflowError):
    def __init__(self, table, cell, message=None):
        super().__init__(message or f"{table}{cell} exceeds the representable range")
        self.table = table
        self.cell = cell


class SearchCapError(PolyRamseyError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class InternalInvariantError(PolyRamseyError, RuntimeError):
    """A guarantee that the mathematics promises was observed to fail."""

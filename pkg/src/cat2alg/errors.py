"""Exception hierarchy shared by every module."""


class Cat2AlgError(Exception):
    """Base class for library errors."""


class InputError(Cat2AlgError):
    """Malformed or inconsistent input data (bad shapes, bad tables)."""


class DimensionError(InputError):
    pass


class UnsupportedError(Cat2AlgError):
    """Requested computation is outside what the library models."""


class ValidationError(Cat2AlgError):
    """A structural identity failed; ``witness`` names where."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

"""Exception types shared across the package."""


class BaryvalError(Exception):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""


class SpaceMismatch(BaryvalError):
    pass


class PreconditionError(BaryvalError):
    """An operation's input failed validation.

    ``witness`` carries the offending object (an open set, a pair of
    elements, ...) when one is available.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedInstance(BaryvalError):
    pass


class BoundExceeded(BaryvalError):
    """A bounded search gave up without reaching a definitive answer."""

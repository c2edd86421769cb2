"""Exception types shared across the package."""


class LogStructError(Exception):
    """Base class for all errors raised by this package."""


class NotSurjective(LogStructError):
    pass


class TargetNotFree(LogStructError):
    pass


class NotPointed(LogStructError):
    """The (sharpened) cone of a monoid contains a line."""


class BoundExhausted(LogStructError):
    """A bounded search (presentation, word problem) gave up at its ceiling."""


class UndecidedError(LogStructError):
    """A word-problem question could not be settled within the bound."""


class NotQuasiIntegral(LogStructError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TorsionPresent(LogStructError):
    pass


class Obstructed(LogStructError):
    pass


class PredicateFailure(LogStructError):
    """A monoid lacks a property (fine, saturated, sharp...) an operation requires."""


class Unsupported(LogStructError):
    """Input outside the finite model this package implements."""


class ValidationError(LogStructError):
    pass


class ParseError(LogStructError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

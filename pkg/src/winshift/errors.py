"""Exception hierarchy shared by every winshift module."""


class WinshiftError(Exception):
    """Base class; the CLI maps subclasses to distinct exit codes."""

    exit_code = 1


class AlphabetError(WinshiftError, ValueError):
    """A symbol outside the declared alphabet, or mismatched alphabets."""

    exit_code = 3


class RepresentationError(WinshiftError, ValueError):
    """A word that is not a valid representation in a numeration system."""

    exit_code = 3


class UnsupportedFeature(WinshiftError):
    exit_code = 4


class ResourceError(WinshiftError):
    """A construction exceeded its state cap."""

    exit_code = 5

    def __init__(self, message, subformula=None):
        if subformula is not None:
            message = f"{message} (while compiling {subformula})"
        super().__init__(message)
        self.subformula = subformula


class FormulaError(WinshiftError):
    """Malformed formula text or an ill-scoped formula."""

    exit_code = 6


class UnknownWord(WinshiftError, KeyError):
    exit_code = 2

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class DimensionExceeded(WinshiftError):
    """The coding dimension is larger than the requested arity or bound."""

    exit_code = 7

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

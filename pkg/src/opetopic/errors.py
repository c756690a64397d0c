"""Exception hierarchy shared by every module."""


class OpetopeError(Exception):
    """Base class for all errors raised by the package."""


class RuleViolation(OpetopeError):
    """A derivation rule was applied outside its side conditions."""


class NotAnOpetope(RuleViolation):
    """A preopetope has no derivation."""


class DimensionError(OpetopeError, ValueError):
    """Operands of incompatible dimensions."""


class ParseError(OpetopeError):
    """Malformed text, with a 1-based line and column."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


class ScriptError(RuleViolation):
    """A rule violation raised while running a script, tagged with its position."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)

"""Exception hierarchy shared by every densig module."""


class DensigError(Exception):
    """Base class. ``line``/``col`` are filled in when raised from a program."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def at(self, line: int, col: int | None = None) -> "DensigError":
        if self.line is None:
            self.line = line
            self.col = col
        return self

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        if self.col is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, col {self.col}: {self.message}"


class DimsError(DensigError):
    """Subsystem dimensions do not match the operand."""


class StateError(DensigError):
    """Input is not a valid state (norm, trace, hermiticity, positivity)."""


class WeightError(StateError):
    """Mixture weights are negative or do not sum to one."""


class BasisError(DensigError):
    """A supplied basis matrix is not unitary."""


class NotHermitianError(StateError):
    pass


class NumericalError(DensigError):
    """Eigensolver failure or a post-condition violated by round-off."""


class ParseError(DensigError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message, line, col)


class UndefinedNameError(ParseError):
    """A state-description program references a name before defining it."""

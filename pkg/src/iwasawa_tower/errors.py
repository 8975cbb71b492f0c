class TowerError(Exception):
    """Base class; ``exit_code`` is what the CLI returns."""

    exit_code = 3


class InputError(TowerError, ValueError):
    exit_code = 1


class ParseError(InputError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)


class PrecisionError(InputError):
    """Not enough p-adic or t-adic precision for a requested result."""


class ParameterMismatch(InputError):
    pass


class SizeCapError(TowerError):
    exit_code = 2

    def __init__(self, msg, required=None):
        self.required = required
        super().__init__(msg)


class InvariantViolation(TowerError):
    exit_code = 3

"""
Error hierarchy shared by every module.

Each error carries a stable ``code`` that reports and exit-code mapping rely on.
"""


class InteriorError(ValueError):
    """Base class for all library errors."""

    code = "INTERIOR_ERROR"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        return f"[{self.code}] {super().__str__()}"


class InputError(InteriorError):
    """Malformed or out-of-range input (exit code 2)."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, code: str | None = None, line: int | None = None, column: int | None = None):
        location = f"line {line}" if line is not None else ""
        if column is not None:
            location = f"{location}, column {column}"
        super().__init__(f"{location}: {message}" if location else message, code)
        self.line = line
        self.column = column


class DisconnectedInputError(InteriorError):
    code = "DISCONNECTED_INPUT"


class NotRootConnectedError(InteriorError):
    code = "NOT_ROOT_CONNECTED"


class NotEulerianError(InteriorError):
    code = "NOT_EULERIAN"


class TooLargeError(InteriorError):
    """An exhaustive search was refused by a budget guard."""

    code = "TOO_LARGE"


class AlgebraError(InteriorError):
    code = "NON_TU_RELATION"


class SingularUnderdeterminedError(AlgebraError):
    code = "SINGULAR_UNDERDETERMINED"


class PolytopeError(InteriorError):
    code = "DEGENERATE_DIMENSION"


class GreedoidError(InteriorError):
    code = "NOT_A_BASIS"


class CheckFailure(InteriorError):
    """A computed identity did not hold; signals an implementation bug or a false claim."""

    code = "THEOREM_VIOLATION"

"""Error codes, the structured error response, and the exception hierarchy."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field


class ErrorCode(str, Enum):
    """Machine-readable error codes emitted by the CLI."""

    INVALID_PARAMETER = "invalid_parameter"
    NOT_PRIME_POWER = "not_prime_power"
    REDUCIBLE_MODULUS = "reducible_modulus"
    DIVISION_BY_ZERO = "division_by_zero"
    FIELD_MISMATCH = "field_mismatch"
    FORMULA_UNAVAILABLE = "formula_unavailable"
    MALFORMED_FILE = "malformed_file"
    BUDGET_EXCEEDED = "budget_exceeded"
    VERIFICATION_FAILED = "verification_failed"


class ErrorResponse(BaseModel):
    """Structured error written to stderr by the CLI."""

    error: ErrorCode = Field(..., description="Machine-readable error code")
    message: str = Field(..., description="Human-readable error description")
    line: int | None = Field(None, description="Offending input line, for file errors")


class SupersatError(Exception):
    """Base class for every error raised by the toolkit.

    Subclasses pin the error code and the process exit code the CLI uses.
    """

    code: ErrorCode = ErrorCode.INVALID_PARAMETER
    exit_code: int = 2

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(message)

    def to_response(self) -> ErrorResponse:
        return ErrorResponse(error=self.code, message=self.message)


class InvalidParameterError(SupersatError):
    """Raised when an operation's precondition on its arguments fails."""


class NotPrimePowerError(InvalidParameterError):
    code = ErrorCode.NOT_PRIME_POWER

    def __init__(self, value: int) -> None:
        self.value = value
        super().__init__(f"{value} is not a prime power")


class ReducibleModulusError(InvalidParameterError):
    code = ErrorCode.REDUCIBLE_MODULUS


class FieldMismatchError(SupersatError):
    code = ErrorCode.FIELD_MISMATCH


class DivisionByZeroError(SupersatError):
    code = ErrorCode.DIVISION_BY_ZERO


class FormulaUnavailableError(SupersatError):
    code = ErrorCode.FORMULA_UNAVAILABLE


class MalformedFileError(SupersatError):
    """Raised when a graph or difference-set file cannot be parsed."""

    code = ErrorCode.MALFORMED_FILE

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")

    def to_response(self) -> ErrorResponse:
        return ErrorResponse(error=self.code, message=self.message, line=self.line)


class BudgetExceededError(SupersatError):
    """Raised when a search exhausts its node or enumeration budget."""

    code = ErrorCode.BUDGET_EXCEEDED
    exit_code = 3

    def __init__(self, nodes: int, cap: int) -> None:
        self.nodes = nodes
        self.cap = cap
        super().__init__(f"search budget exceeded: {nodes} nodes > cap {cap}")


class VerificationError(SupersatError):
    """Raised when a computed object contradicts an identity it must satisfy."""

    code = ErrorCode.VERIFICATION_FAILED
    exit_code = 1

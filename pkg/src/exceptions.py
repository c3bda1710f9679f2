"""Exception hierarchy shared by the library modules and the CLI."""

from typing import Optional


class VqeLabError(Exception):
    """Base class for all errors raised by the lab."""


class DataValidationError(VqeLabError, ValueError):
    """An input violates a documented invariant (qubit range, arity, grid mismatch, ...)."""


class HamiltonianFormatError(VqeLabError, ValueError):
    """A Hamiltonian coefficient file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class NumericalError(VqeLabError, ArithmeticError):
    """A numerical routine failed (non-Hermitian input, no convergence)."""

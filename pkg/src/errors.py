"""
Exception hierarchy shared by the library modules and the CLI.
"""

from enum import Enum
from typing import Any, Dict, Optional


class ErrorCategory(Enum):
    """Categories of errors, used to pick CLI exit codes."""
    DOMAIN = "domain"            # Bad indices, unknown vertices, shape mismatches
    BOUND = "bound"              # Configured size bound exceeded
    PARSE = "parse"              # Malformed input files
    CONSISTENCY = "consistency"  # A verified identity failed at runtime


class CircleMatroidError(Exception):
    """Base class for every error raised by this package."""

    category: ErrorCategory = ErrorCategory.DOMAIN

    def __init__(self, message: str, *, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "category": self.category.value,
            "type": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


class DomainError(CircleMatroidError, ValueError):
    """Precondition violated by the caller."""
    category = ErrorCategory.DOMAIN


class BoundExceededError(CircleMatroidError):
    """Input is larger than the configured enumeration bound."""
    category = ErrorCategory.BOUND

    def __init__(self, what: str, size: int, bound: int):
        super().__init__(
            f"{what}: size {size} exceeds configured bound {bound}",
            details={"what": what, "size": size, "bound": bound},
        )
        self.size = size
        self.bound = bound


class ParseError(CircleMatroidError, ValueError):
    """Input file or text could not be parsed."""
    category = ErrorCategory.PARSE

    def __init__(self, message: str, *, line: Optional[int] = None, source: Optional[str] = None):
        location = ""
        if source:
            location += f"{source}"
        if line is not None:
            location += f":{line}"
        super().__init__(f"{location}: {message}" if location else message,
                         details={"line": line, "source": source})


class ConsistencyError(CircleMatroidError, RuntimeError):
    """An identity the constructions guarantee did not hold."""
    category = ErrorCategory.CONSISTENCY


_EXIT_CODES = {
    ErrorCategory.BOUND: 2,
    ErrorCategory.PARSE: 3,
    ErrorCategory.DOMAIN: 3,
    ErrorCategory.CONSISTENCY: 4,
}


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit code (always > 1 for errors)."""
    if isinstance(error, CircleMatroidError):
        return _EXIT_CODES[error.category]
    return 4

"""
Exceptions raised by the asynchronous games workbench.
"""

from dataclasses import dataclass
from typing import Optional


class AsyncGamesError(Exception):
    """Base class for all workbench errors."""


class PreconditionError(AsyncGamesError):
    """An operation was called outside of its domain."""


class ValidationError(AsyncGamesError):
    """Structurally invalid input: unknown move, causality cycle, bad address."""


@dataclass(frozen=True)
class SourceSpan:
    """
    Location of a token inside a source text.
    """
    file_name: str  # "<string>" when parsing in-memory text
    line: int  # 1-based
    column: int  # 1-based
    length: int = 1

    def __str__(self) -> str:
        return f"{self.file_name}:{self.line}:{self.column}"


class ParseError(ValidationError):
    """Syntax error in one of the textual formats."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        self.message = message
        self.span = span
        if span is not None:
            message = f"{span}: {message}"
        super().__init__(message)

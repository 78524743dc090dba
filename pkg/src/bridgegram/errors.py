"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "BridgegramError",
    "OutOfVocabulary",
    "FileFormatError",
    "UndefinedCorrelationError",
]


class BridgegramError(Exception):
    """Base class for all package-specific errors."""


class OutOfVocabulary(BridgegramError):
    """A token has no vocabulary entry and the model cannot represent it."""

    def __init__(self, token: str):
        super().__init__(f"token not in vocabulary: {token!r}")
        self.token = token


class FileFormatError(BridgegramError):
    """A data file (vectors, dictionary, dataset) failed to parse."""

    def __init__(self, path, line_no: int | None, message: str):
        location = str(path) if line_no is None else f"{path}:{line_no}"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line_no = line_no


class UndefinedCorrelationError(BridgegramError):
    """Rank correlation is undefined because one input is constant."""

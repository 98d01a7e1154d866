"""Exception hierarchy shared by the parsers and the CLI."""

from __future__ import annotations


class RefgenError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RefgenError):
    """Input could not be read as the expected format.

    ``location`` is a human-readable pointer into the source: a line number,
    a JSON field path, or a token position.
    """

    def __init__(self, message: str, *, source: str | None = None, location: str | None = None):
        self.source = source
        self.location = location
        prefix = ":".join(p for p in (source, location) if p)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ValidationError(RefgenError):
    """Input was well-formed but violates a semantic rule."""

    def __init__(self, message: str, *, source: str | None = None, offenders: list | None = None):
        self.source = source
        self.offenders = list(offenders or [])
        super().__init__(f"{source}: {message}" if source else message)


class ExpressionParseError(ParseError):
    """Text is not in the referring-expression grammar."""

    def __init__(self, message: str, *, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(message, location=f"token {position}")

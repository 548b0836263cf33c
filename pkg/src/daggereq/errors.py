"""Exception types shared across the package."""

from __future__ import annotations


class DaggereqError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(DaggereqError):
    """Invalid signature: bad declaration, unknown name, broken involution."""


class ParseError(DaggereqError):
    """Syntax error in a signature, term, diagram or interpretation file.

    Carries an optional source position so the CLI can point at the
    offending token.
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            where = f"{line}" if col is None else f"{line}:{col}"
            message = f"{where}: {message}"
        super().__init__(message)


class TypeCheckError(DaggereqError):
    """Term does not type-check against its signature."""


class DiagramError(DaggereqError):
    """Malformed diagram: typing or bijectivity conditions violated."""


class InterpretationError(DaggereqError):
    """Interpretation does not match the signature or diagram it is used with."""

"""Exception hierarchy shared across the system.

Compile-time problems (reading, translation, loading) carry a source
position; runtime problems carry the culprit term where useful.
"""

from __future__ import annotations


class UnexpandError(Exception):
    """Base class for every error raised by this package."""


class SourceError(UnexpandError):
    """A problem tied to a position in program text."""

    def __init__(self, message: str, module: str | None = None,
                 line: int | None = None, col: int | None = None):
        self.message = message
        self.module = module
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self) -> str:
        where = []
        if self.module is not None:
            where.append(self.module)
        if self.line is not None:
            where.append(str(self.line))
        if self.col is not None:
            where.append(str(self.col))
        if where:
            return "%s: %s" % (":".join(where), self.message)
        return self.message


class ReadError(SourceError):
    """Tokenizer or parser failure."""


class TranslationError(SourceError):
    """A package's translation rule rejected a sentence."""


class LoadError(SourceError):
    """Program cannot be consulted (bad directive, reserved head, ...)."""


class ExtractionError(UnexpandError):
    """Malformed meta-annotation found while extracting the symbol table."""


class PrologError(UnexpandError):
    """Runtime error during query evaluation."""


class InstantiationError(PrologError):
    """A variable was unbound where a bound value is required."""


class EvalTypeError(PrologError):
    """Arithmetic evaluation met a non-numeric or unknown functor."""


class EvaluationError(PrologError):
    """Arithmetic fault such as division by zero."""


class DuplicatePackageError(UnexpandError):
    """A package name was registered twice."""


class ProtocolError(UnexpandError):
    """Malformed traffic on the debug wire protocol."""

"""Exception hierarchy.

Every error raised for bad input or a violated precondition derives from
:class:`GaussnetError`; the CLI maps these to exit status 1.
"""

from __future__ import annotations


class GaussnetError(Exception):
    """Base class for domain errors."""


class ParseError(GaussnetError):
    """Malformed DAG file, polynomial, matrix or partial permutation."""

    def __init__(self, message: str, line: int | None = None, text: str | None = None):
        self.line = line
        self.text = text
        if line is not None:
            message = f"line {line}: {message}"
            if text is not None:
                message += f": {text!r}"
        super().__init__(message)


class CycleError(GaussnetError):
    """The edge set contains a directed cycle."""


class GraphError(GaussnetError):
    """A structural precondition on a graph failed (not a tree, bad vertex, ...)."""


class AlgebraError(GaussnetError):
    """Singular matrix, shape mismatch, unmapped variable and the like."""


class ParameterError(GaussnetError):
    """A parameter assignment lies outside the admissible region."""


class SizeGuardError(GaussnetError):
    """Input exceeds the size a brute-force routine is willing to handle."""

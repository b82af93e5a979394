from __future__ import annotations


class AutocatError(Exception):
    """Base class for every error raised by the package."""


class ModelMismatch(AutocatError, TypeError):
    """A morphism was handed to a model that does not own it."""


class ShapeMismatch(AutocatError, ValueError):
    """Domains, codomains or dimensions do not line up."""


class InterfaceMismatch(ShapeMismatch):
    """Two diagram interfaces differ.

    ``position`` is the index of the first differing entry, or the length of
    the shorter interface when one is a prefix of the other.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class InvalidDiagram(AutocatError, ValueError):
    """A diagram violates chaining or winding invariants."""


class Uninterpretable(AutocatError, KeyError):
    """An object or generator has no image under a functor."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class ParseError(AutocatError, ValueError):
    """Malformed input text (signature, diagram, lexicon, matrix, type)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

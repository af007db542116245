"""Exception types raised by the toolkit."""

from typing import Optional


class CensusError(Exception):
    """Base class for all toolkit errors."""


class PresentationSyntaxError(CensusError, ValueError):
    """Presentation text does not conform to the DSL."""

    def __init__(self, message: str, line: int, column: int):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownGeneratorError(PresentationSyntaxError):
    """A word mentions a name that is not a generator."""

    def __init__(self, name: str, line: int, column: int):
        self.name = name
        super().__init__(f"unknown generator '{name}'", line, column)


class CosetBudgetExceeded(CensusError):
    """Coset enumeration did not close within the coset budget."""

    def __init__(self, max_cosets: int):
        self.max_cosets = max_cosets
        super().__init__(
            f"coset enumeration exceeded {max_cosets} cosets "
            "(infinite index or insufficient budget)"
        )


class SearchBudgetExceeded(CensusError):
    """Low-index search exceeded its node budget."""

    def __init__(self, max_nodes: int):
        self.max_nodes = max_nodes
        super().__init__(f"low-index search exceeded {max_nodes} table extensions")


class InvalidCosetTable(CensusError, ValueError):
    """A coset table is malformed or does not satisfy the presentation."""


class QuotientTypeError(CensusError, ValueError):
    """Quotient type requested for a table that is not normal of index four."""


class EmbeddingError(CensusError, ValueError):
    """Supergroup embedding words are malformed or inconsistent."""


class NumericsError(CensusError, ValueError):
    """Numerical input outside the range where a formula applies."""

    def __init__(self, message: str, value: Optional[int] = None):
        self.value = value
        super().__init__(message)

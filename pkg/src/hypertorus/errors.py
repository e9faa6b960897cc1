"""Exception hierarchy shared by all hypertorus modules."""

from __future__ import annotations


class HypertorusError(Exception):
    """Base class for every error raised by the library."""


class DimensionMismatch(HypertorusError, ValueError):
    pass


class RankDeficient(HypertorusError, ValueError):
    pass


class NotSublattice(HypertorusError, ValueError):
    pass


class MultiplierOrder(HypertorusError, ValueError):
    pass


class PeriodMixing(HypertorusError, ValueError):
    pass


class SpecMismatch(HypertorusError, ValueError):
    pass


class NotLatticePreserving(HypertorusError, ValueError):
    pass


class OrderExceedsBound(HypertorusError, RuntimeError):
    pass


class GroupNotClosed(HypertorusError, RuntimeError):
    pass


class UnknownSymbol(HypertorusError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class GridTooLarge(HypertorusError, ValueError):
    pass


class NotFiniteOrder(HypertorusError, ValueError):
    pass


class DegenerateChoice(HypertorusError, ValueError):
    pass


class NotInEigenspace(HypertorusError, ValueError):
    pass


class NotInvariantSubspace(HypertorusError, ValueError):
    pass


class NotSelfConjugate(HypertorusError, ArithmeticError):
    pass


class InputError(HypertorusError):
    """Problems with user-supplied configuration text."""


class ParseError(InputError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class SemanticError(InputError):
    def __init__(self, message: str, line: int | None = None) -> None:
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.message = message
        self.line = line

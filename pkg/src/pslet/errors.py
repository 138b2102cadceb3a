"""Exception hierarchy.

Parse-level problems derive from :class:`PotentialSyntaxError`; everything
raised while computing derives from :class:`NumericError`. The CLI maps the
two families onto exit codes 2 and 3.
"""

from __future__ import annotations


class PSLETError(Exception):
    """Base class for all package errors."""


class PotentialSyntaxError(PSLETError, ValueError):
    """Potential text does not conform to the grammar.

    Attributes
    ----------
    offset : int
        Zero-based character offset of the offending token.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownSymbol(PotentialSyntaxError):
    """An identifier other than ``r`` appeared in the potential."""


class NumericError(PSLETError, ArithmeticError):
    """Base class for failures during a computation."""


class SingularMatrix(NumericError):
    pass


class NoBracket(NumericError):
    pass


class SingularPoint(NumericError):
    """A denominator vanishes at the expansion point."""


class NoBinding(NumericError):
    """No effective radius exists, i.e. the potential does not bind the state."""


class ComplexFrequency(NumericError):
    pass


class InsufficientJet(NumericError):
    pass


class OrderOverflow(NumericError):
    """The moment recursion referenced an index beyond its configured bound."""


class DegeneratePade(NumericError):
    pass


class NodeMismatch(NumericError):
    pass


class NoBoundState(NumericError):
    pass

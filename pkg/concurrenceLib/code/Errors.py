# -*- coding: utf-8 -*-
"""
Exceptions raised by concurrenceLib.

Every error is a ValueError so callers can catch bad input the usual way;
the numerical faults are ArithmeticErrors as well.
"""


class ConcurrenceError(ValueError):
    pass


class NonHermitianError(ConcurrenceError):
    pass


class NotPSDError(ConcurrenceError):
    pass


class TraceNotOneError(ConcurrenceError):
    pass


class DimensionMismatchError(ConcurrenceError):
    pass


class NotUnitaryError(ConcurrenceError):
    pass


class InvalidParamsError(ConcurrenceError):
    pass


class RankTooHighError(ConcurrenceError):
    """Decomposition length shorter than the rank of the state"""


class UnsupportedDimsError(ConcurrenceError):
    pass


class MalformedInputError(ConcurrenceError):
    """Input file or payload that cannot be parsed into a state"""


class ConvergenceFailureError(ConcurrenceError, ArithmeticError):
    pass


class DomainError(ConcurrenceError, ArithmeticError):
    """A quantity left its mathematical domain, which signals a numerical fault"""

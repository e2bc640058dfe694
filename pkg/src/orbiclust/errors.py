"""Exception hierarchy.

``InputError`` covers malformed or invalid inputs (CLI exit code 2);
``PropertyFailure`` is raised when a checked mathematical identity fails
(exit code 3).  Everything else indicates a bug.
"""


class OrbiclustError(Exception):
    """Base class for all package errors."""


class InputError(OrbiclustError, ValueError):
    """Invalid input data."""


class PropertyFailure(OrbiclustError):
    """A verified identity did not hold."""


# arithmetic
class DivNotExact(OrbiclustError, ArithmeticError):
    pass


class UnboundVariable(InputError):
    pass


class NegativeCoefficient(InputError):
    pass


class NonIntegerCoefficient(PropertyFailure):
    pass


class NotPolynomial(PropertyFailure):
    pass


# cluster algebra
class IndexOutOfRange(InputError, IndexError):
    pass


class NonLaurentResult(PropertyFailure):
    pass


class NotHomogeneous(PropertyFailure):
    pass


class NotSkewSymmetrizable(InputError):
    pass


# triangulations and algebras
class InvalidTriangulation(InputError):
    pass


class NotAnArc(InputError):
    pass


class NonFinite(InputError):
    pass


class NoThroughPair(InputError):
    pass


# representations
class InvalidRepresentation(InputError):
    pass


class AlgebraMismatch(InputError):
    pass


class RelationViolated(PropertyFailure):
    pass


class NoSplitting(PropertyFailure):
    pass


class NotLocallyFree(InputError):
    pass


class GVectorUndefined(NotLocallyFree):
    pass


class SizeBound(InputError):
    pass


class NonPolynomialResult(PropertyFailure):
    pass


class NotPolynomialCount(PropertyFailure):
    """Submodule counts over F_p do not follow a polynomial in p."""


class InvalidWord(InputError):
    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


class CaseMismatch(PropertyFailure):
    pass

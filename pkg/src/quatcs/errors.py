"""Exception hierarchy for quatcs."""


class QuatcsError(Exception):
    """Base class for all errors raised by this package."""


class MalformedMatrix(QuatcsError, ValueError):
    """A 2x2 complex matrix is not the image of a quaternion."""


class NotInImage(QuatcsError, ValueError):
    """A block complex matrix is not the embedding of a quaternion matrix."""


class DimensionMismatch(QuatcsError, ValueError):
    pass


class BasisMismatch(DimensionMismatch):
    """Vectors or operators expressed in different fixed bases were combined."""


class TruncationTooSmall(QuatcsError, ValueError):
    """The dropped Fock tail of a state exceeds the allowed mass."""


class BadAxis(QuatcsError, ValueError):
    """Expected a unit, purely imaginary quaternion."""


class MeanZero(QuatcsError, ZeroDivisionError):
    """Mandel parameter requested for a state with no photons."""


class NotCanonicalPair(QuatcsError, ValueError):
    """The commutator of two observables is not of the form I*C."""


class SliceMismatch(QuatcsError, ValueError):
    """Quaternions that were required to share a slice do not."""


class BadGrid(QuatcsError, ValueError):
    pass


class ParseError(QuatcsError, ValueError):
    """A quaternion literal could not be parsed.

    ``column`` is the 1-based position of the offending token.
    """

    def __init__(self, message, text="", column=0):
        super().__init__(message)
        self.text = text
        self.column = column

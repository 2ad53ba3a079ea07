"""Exception hierarchy.

Every error raised on bad input derives from :class:`FrameforgeError`, which is
itself a ``ValueError`` so callers that only care about "bad arguments" can
catch that.
"""


class FrameforgeError(ValueError):
    pass


class InvalidInput(FrameforgeError):
    pass


class ShapeError(FrameforgeError):
    pass


class NotHermitian(FrameforgeError):
    pass


class NotPSD(FrameforgeError):
    pass


class SingularOperator(FrameforgeError):
    pass


class NotAFrame(FrameforgeError):
    pass


class NotRieszBasis(FrameforgeError):
    pass


class NotRieszSequence(FrameforgeError):
    pass


class NotParseval(FrameforgeError):
    pass


class InvalidSubspace(FrameforgeError):
    pass


class NormTooLarge(FrameforgeError):
    pass


class NotIsomorphism(FrameforgeError):
    pass


class InvalidEpsilon(FrameforgeError):
    pass


class InvalidBudgets(FrameforgeError):
    pass


class InvalidP(FrameforgeError):
    pass


class BudgetTooLarge(FrameforgeError):
    pass


class ZeroVector(FrameforgeError):
    pass

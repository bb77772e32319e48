"""Exception hierarchy.

Every error carries a category that the command line maps to an exit code:
``input`` (1), ``math`` (2) and ``internal`` (3).
"""


class LogFuchsError(Exception):
    category = "math"


class ParseError(LogFuchsError):
    category = "input"

    def __init__(self, message, position=None, expected=None):
        self.detail = message
        self.position = position
        self.expected = expected
        text = message
        if position is not None:
            text += f" at position {position}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


class ValidationError(LogFuchsError):
    category = "input"

    def __init__(self, message, point=None, cause=None):
        self.point = point
        self.cause = cause
        super().__init__(message)


class NotSquare(LogFuchsError):
    pass


class NotConstant(LogFuchsError):
    pass


class NonRationalSpectrum(LogFuchsError):
    pass


class NotLogarithmic(LogFuchsError):
    def __init__(self, message, point=None):
        self.point = point
        super().__init__(message)


class GenusNotSupported(LogFuchsError):
    pass


class NotNormalized(LogFuchsError):
    pass


class NotEigenvector(LogFuchsError):
    pass


class InfinitePoint(LogFuchsError):
    pass


class NotInSpectrum(LogFuchsError):
    pass


class PreconditionViolated(LogFuchsError):
    def __init__(self, message, clause=None):
        self.clause = clause
        super().__init__(message)


class SpacingViolation(LogFuchsError):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class NoEligibleEigenvector(LogFuchsError):
    pass


class NotTrivialBundle(LogFuchsError):
    pass


class ZeroSubsheaf(LogFuchsError):
    pass


class FullRank(LogFuchsError):
    pass


class NotRankOne(LogFuchsError):
    pass


class RankTooSmall(LogFuchsError):
    pass


class ScreenFailed(LogFuchsError):
    pass


class ObstructionNonzero(LogFuchsError):
    pass


class InternalAssertionFailure(LogFuchsError):
    category = "internal"

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class InternalInconsistency(InternalAssertionFailure):
    pass

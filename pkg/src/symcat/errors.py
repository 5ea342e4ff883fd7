"""Exception hierarchy shared by every symcat module.

Law violations are *not* exceptions: checkers return a
:class:`~symcat.report.LawReport` listing witnesses.  The classes below
signal malformed input or a computation that cannot proceed.
"""


class SymcatError(Exception):
    """Base class for all symcat errors."""


class MalformedDocument(SymcatError):
    """Dangling ids, missing table entries or structurally invalid input."""


class NotComposable(SymcatError):
    pass


class BudgetExceeded(SymcatError):
    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NotInHyp(SymcatError):
    pass


class NotIso(SymcatError):
    pass


class NonIntegralCount(SymcatError):
    pass


class DimensionMismatch(SymcatError, ValueError):
    pass


class GroupMismatch(SymcatError, ValueError):
    pass


class NonPermutationWithNonlinearity(SymcatError):
    pass


class BudgetExhausted(SymcatError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NonFinite(SymcatError, FloatingPointError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NonConvergence(SymcatError):
    def __init__(self, message, last=None, residuals=()):
        super().__init__(message)
        self.last = last
        self.residuals = list(residuals)


class EmptyTrajectory(SymcatError):
    pass


class AsymmetricDomain(SymcatError):
    pass


class ActionNotSimplicial(SymcatError):
    pass


class LengthMismatch(SymcatError, ValueError):
    pass


# Document / CLI layer.

class ParseError(SymcatError):
    exit_code = 2


class SchemaError(SymcatError):
    exit_code = 2


class ValidationFailure(SymcatError):
    exit_code = 1

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UsageError(SymcatError):
    exit_code = 2

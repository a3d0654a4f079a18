"""Exception hierarchy shared by every module."""


class CharvarError(Exception):
    """Base class for all errors raised by charvar."""


class NotPrime(CharvarError, ValueError):
    pass


class DegreeZero(CharvarError, ValueError):
    pass


class NoRootOfUnity(CharvarError, ValueError):
    pass


class FieldTooLarge(CharvarError, ValueError):
    """The field is too large for table-driven kernels."""


class EnumerationTooLarge(CharvarError, RuntimeError):
    pass


class TableMismatch(CharvarError, ValueError):
    pass


class SingularTarget(CharvarError, ValueError):
    pass


class NonIntegralQuotient(CharvarError, ArithmeticError):
    pass


class InsufficientSamples(CharvarError, ValueError):
    pass


class HoldoutMismatch(CharvarError, ArithmeticError):
    pass


class NonIntegerCoefficients(CharvarError, ArithmeticError):
    pass


class DivisionByZero(CharvarError, ZeroDivisionError):
    pass


class TowerTooShallow(CharvarError, ValueError):
    pass


class NonzeroConstantTerm(CharvarError, ValueError):
    pass


class BadConstantTerm(CharvarError, ValueError):
    pass


class MissingCounts(CharvarError, KeyError):
    pass


class MalformedMap(CharvarError, ValueError):
    pass


class GenusZero(CharvarError, ValueError):
    pass


class NoGrading(CharvarError, ValueError):
    pass


class CutMeetsLocalization(CharvarError, ValueError):
    pass


class AuditFailure(CharvarError, AssertionError):
    pass


class NoCut(CharvarError, ValueError):
    pass


class IdentityFailure(CharvarError, AssertionError):
    """A count identity did not hold.  The failing report is attached."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report

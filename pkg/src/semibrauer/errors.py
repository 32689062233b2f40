"""Exception hierarchy shared by all modules."""


class AlgebraError(Exception):
    """Base class for every error raised by this package."""


# group / modification structure
class NotLatin(AlgebraError):
    pass


class NoIdentity(AlgebraError):
    pass


class NoInverse(AlgebraError):
    pass


class NotAssociative(AlgebraError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IdentityPairErased(AlgebraError):
    pass


class GroupTooLarge(AlgebraError):
    pass


class GroupMismatch(AlgebraError):
    pass


class NotNormal(AlgebraError):
    pass


class NotCongruence(AlgebraError):
    pass


# linear algebra
class DimensionMismatch(AlgebraError):
    pass


class NoSolution(AlgebraError):
    pass


class IllDefined(AlgebraError):
    pass


# modules and cohomology
class NotAutomorphism(AlgebraError):
    pass


class ActionIncompatible(AlgebraError):
    pass


class DimensionUnsupported(AlgebraError):
    pass


class NotACocycle(AlgebraError):
    pass


class BudgetExceeded(AlgebraError):
    pass


class NotComparable(AlgebraError):
    pass


class LiftNotCocycle(AlgebraError):
    pass


# finite fields
class NotPrime(AlgebraError):
    pass


class NotDivisible(AlgebraError):
    pass


class TooLarge(AlgebraError):
    pass


class FixedPointMismatch(AlgebraError):
    pass


# monoid and verifier
class ForeignElement(AlgebraError):
    pass


class NotInKernelOfPhi(AlgebraError):
    pass


class HypothesisFailed(AlgebraError):
    pass


class DescentAssertionFailed(AlgebraError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(AlgebraError):
    pass

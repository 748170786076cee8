"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
2 for bad input, 3 for numerical failure, 4 for a violated calculus
precondition, 5 for a failed verification.
"""


class SliceCalcError(Exception):
    exit_code = 3

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(SliceCalcError, ValueError):
    exit_code = 2


class DimensionMismatch(InputError):
    pass


class UnknownFunction(InputError):
    pass


class NumericalError(SliceCalcError):
    exit_code = 3


class Singular(NumericalError):
    pass


class DefectiveMatrix(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class EigenFailure(NumericalError):
    pass


class PreconditionError(SliceCalcError):
    exit_code = 4


class OutOfDomain(PreconditionError):
    pass


class ZeroDivisor(PreconditionError):
    pass


class ConditionViolated(PreconditionError):
    pass


class SideMismatch(PreconditionError):
    pass


class OnSpectrumSphere(PreconditionError):
    pass


class OnSpectrum(PreconditionError):
    pass


class SphereCollision(PreconditionError):
    pass


class PathHitsSpectrum(PreconditionError):
    pass


class DomainTooSmall(PreconditionError):
    pass


class NotTypeOmega(PreconditionError):
    pass


class NotInPsiClass(PreconditionError):
    pass


class NotPsiPlus(PreconditionError):
    pass


class NotInFClass(PreconditionError):
    pass


class PoleOnSpectrum(PreconditionError):
    pass


class RegularizerSingular(PoleOnSpectrum):
    """psi(T) is not invertible: a zero or pole sphere of the regularizer meets the spectrum."""


class HypothesisFailed(PreconditionError):
    pass


class VerificationFailed(SliceCalcError):
    exit_code = 5

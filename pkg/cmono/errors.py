#
# (c) 2026, pyCMono contributors
#
# Created: 02.10.2026
# Updated: 14.10.2026
#
# License: Apache 2.0
#
"""
All exceptions raised by `cmono`.  There are two families: a `ValidationError` means that the input was not
acceptable (wrong measure spec, parameters out of range, a word that refers to an unknown algebra), while a
`NumericalError` means that a computation did not meet its numerical guarantees.  The command line interface maps
the first family to exit code 1 and the second one to exit code 2.
"""


class CMonoError(Exception): pass


class ValidationError(CMonoError): pass


class NumericalError(CMonoError): pass


class TrackDisagreement(RuntimeWarning): pass


# measures

class InvalidMeasure(ValidationError): pass

class MalformedSpec(ValidationError): pass

class CauchyHasNoMoments(ValidationError): pass

class NonpositiveScale(ValidationError): pass


# transforms

class DegreeOverflow(NumericalError): pass

class NotAProbabilityH(ValidationError): pass

class NotFiniteVariance(ValidationError): pass

class NonconvergentLadder(NumericalError): pass

class NoSignChange(NumericalError): pass

class BranchCutHit(NumericalError): pass


class AnalyticSyntaxError(ValidationError, SyntaxError):
    """
    Raised when the text of a closed-form analytic map cannot be parsed.  The position points into the expression
    text, exactly as with a regular Python `SyntaxError`.
    """

    def __init__(self, msg: str, expression: str = None, offset: int = None):
        if expression is not None:
            SyntaxError.__init__(self, msg, ('<analytic>', 1, offset, expression))
        else:
            SyntaxError.__init__(self, msg)


# partitions / cumulants

class SizeCap(ValidationError): pass

class InconsistentSystem(NumericalError): pass

class NonPolynomialGrowth(NumericalError): pass


# convolutions

class TransformInapplicable(ValidationError): pass

class NotInvertible(ValidationError): pass


# mixed moments

class MalformedWord(ValidationError): pass

class DegreeCapExceeded(ValidationError): pass


# semigroups

class LeftUpperHalfPlane(NumericalError): pass

class InsufficientOrder(ValidationError): pass


# limits

class NotNormalized(ValidationError): pass

class IrrationalDilation(ValidationError): pass

class HeunWKBError(Exception):
    """Base class for every error raised by heunwkb"""


class InvariantViolation(HeunWKBError):
    """An internal consistency check failed"""


# core algebra

class ParseError(HeunWKBError):
    """Text or sympy expression is not a valid coefficient"""


class NonInvertible(HeunWKBError, ZeroDivisionError):
    """Coefficient has no inverse in the parameter field"""


class BranchError(HeunWKBError):
    """Square root is not available in the surd tower or contradicts the requested branch"""


class NonInvertibleLeading(HeunWKBError, ZeroDivisionError):
    """Division by a series whose leading term is zero"""


class TagMismatch(HeunWKBError):
    """Series in different variables were combined"""


class InsufficientDepth(HeunWKBError):
    """Series truncation is too shallow for the requested coefficient"""

    def __init__(self, message: str, required: object = None) -> None:
        super().__init__(message)
        self.required = required


# catalog

class CatalogMiss(HeunWKBError, KeyError):
    """Unknown expansion case or block id"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ''


class ScalingMismatch(HeunWKBError):
    """The hbar rescaling does not reproduce the potential"""


class ScalingDegreeError(HeunWKBError):
    """Rescaled potential has no finite Lambda -> 0 limit"""


class DegenerationError(HeunWKBError):
    """Limiting curve does not degenerate as the case claims"""


# solver

class DegeneratePivot(InvariantViolation):
    """Residue does not depend on the unknown it should pin"""


class ParityViolation(InvariantViolation):
    """An odd hbar order of the accessory parameter is not zero"""


class ResidueConditionViolation(InvariantViolation):
    """A residue without an unknown differs from its target"""


class ResonantParameter(HeunWKBError, ZeroDivisionError):
    """Recursion divides by 2*lambda + m at a specialisation where it vanishes"""


class OracleMismatch(InvariantViolation):
    """Exact rational coefficients disagree with the hbar-expanded table"""


# conformal blocks

class PoleOrderViolation(InvariantViolation):
    """The NS limit keeps a pole in eps1*eps2"""


class ConjectureMismatch(HeunWKBError):
    """Accessory parameter and conformal block disagree"""

    def __init__(self, message: str, exponent: object = None, expected: object = None, actual: object = None) -> None:
        super().__init__(message)
        self.exponent = exponent
        self.expected = expected
        self.actual = actual


# numerics

class MissingSymbol(HeunWKBError, KeyError):
    """Numeric evaluation needs a value that was not assigned"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ''


class BranchTrackError(HeunWKBError):
    """Square root jumped between adjacent contour nodes"""


class ContourError(HeunWKBError):
    """Contour encloses the wrong set of turning points or poles"""
"""Exception types shared by every subsystem.

Each error carries a stable ``code`` string so the CLI can render module
errors uniformly and scripts can match on them.
"""


class SchemeError(Exception):
    code = "error"

    def __init__(self, message=""):
        super().__init__(message or self.__class__.__name__)


class ZeroPolynomial(SchemeError):
    code = "zero-polynomial"


class ConstantPolynomial(SchemeError):
    code = "constant-polynomial"


class NotHomogeneous(SchemeError):
    code = "not-homogeneous"


class UnsupportedDomain(SchemeError):
    code = "unsupported-domain"


class InfiniteDomain(SchemeError):
    code = "infinite-domain"


class NonFieldBase(SchemeError):
    code = "non-field-base"


class Undecidable(SchemeError):
    code = "undecidable"


class UndecidableContext(SchemeError):
    code = "undecidable-context"


class NoCanonicalMap(SchemeError):
    code = "no-canonical-map"


class NotCatalogued(SchemeError):
    code = "not-catalogued"


class FactorizationUnavailable(SchemeError):
    code = "factorization-unavailable"


class Unsupported(SchemeError):
    code = "unsupported"


class ResidueFieldNotRepresentable(SchemeError):
    code = "residue-field-not-representable"


class IntegralityNotWitnessed(SchemeError):
    code = "integrality-not-witnessed"


class UnitIdeal(SchemeError):
    code = "unit-ideal"


class NilpotentCoordinate(SchemeError):
    code = "nilpotent-coordinate"


class DenominatorVanishes(SchemeError):
    code = "denominator-vanishes"


class AllZero(SchemeError):
    code = "all-zero"


class NonInvertibleUnit(SchemeError):
    code = "non-invertible-unit"


class InfiniteSpectrum(SchemeError):
    code = "infinite-spectrum"


class NotInvertible(SchemeError):
    code = "not-invertible"


class DslSyntaxError(SchemeError):
    code = "syntax-error"

    def __init__(self, message, line=None, column=None, expected=None):
        self.line = line
        self.column = column
        self.expected = expected or []
        loc = f" at line {line}, column {column}" if line is not None else ""
        exp = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message}{loc}{exp}")

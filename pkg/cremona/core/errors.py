"""Exception hierarchy for exact computations, model validation and deciders."""

import re
from typing import Optional


def _snake(name: str) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", name).lower()


class CremonaError(ValueError):
    """Base class for every domain error."""

    exit_code = 3

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    @property
    def code(self) -> str:
        return _snake(type(self).__name__)

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


class ParseError(CremonaError):
    """Malformed polynomial text, form literal or model stanza."""

    exit_code = 2

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


# === ARITHMETIC ERRORS ===

class ArithmeticDomainError(CremonaError):
    """Operation undefined for the given exact input."""


class ZeroPolynomial(ArithmeticDomainError):
    """The zero polynomial was passed where a nonzero one is required."""


class ReducibleModulus(ArithmeticDomainError):
    """A residue was requested at a reducible polynomial."""


class ResidueFieldUnsupported(ArithmeticDomainError):
    """Residue fields other than R and C are not modeled."""


class NonRationalPullback(ArithmeticDomainError):
    """A pullback by a map with irrational entries has irrational coefficients."""


# === MODEL ERRORS ===

class ModelError(CremonaError):
    """Input data does not describe a valid model for the requested operation."""


class NotSquareFree(ModelError):
    """A polynomial that must be square-free has a multiple root."""


class CommonDivisor(ModelError):
    """Entries that must be coprime share a factor."""


class OddDiscriminantDegree(ModelError):
    """The discriminant of a conic bundle has odd degree."""


class DegenerateBinaryPart(ModelError):
    """A or C vanishes identically, or the discriminant is constant."""


class NonEmptyFibreAtInfinity(ModelError):
    """An unbounded region of the base line carries real fibres."""


class NotNormalized(ModelError):
    """H has complex roots, a nonnegative leading coefficient or a root with negative discriminant."""


class IrrationalSplitRequired(ModelError):
    """An elementary transformation would need coefficients outside the rationals."""


class DegreeMismatch(ModelError):
    """A declared homogeneous degree is below the actual degree."""


class TooFewPoints(ModelError):
    """A point configuration is too small to pin down a projective map."""


class DegreeTooSmall(ModelError):
    """The binary form degree is below the range where the operation is defined."""


class SingularQuartic(ModelError):
    """The Kowalevskaya quartic has a singular point."""


class InvalidAction(ModelError):
    """The given action is not an involution of the quadric."""


class InvalidParameters(ModelError):
    """Parameters fall outside the ranges of the construction."""


class DeltaOutOfRange(ModelError):
    """The special fibre count is not 0, 1 or 2."""


class NotRRational(ModelError):
    """The real locus is not connected, so the surface is not rational over R."""


class DeciderMismatch(CremonaError):
    """The two quadratic form deciders returned different verdicts."""

    exit_code = 5

"""Exception hierarchy shared by every module.

All library errors derive from :class:`KRError`; the command line maps them to
exit status 2 (domain error).
"""

from __future__ import annotations


class KRError(Exception):
    """Base class for domain errors raised by the library."""


class MalformedSpec(KRError, ValueError):
    """Text input does not match the expected grammar."""


class UnsupportedType(KRError):
    """The affine type (or the requested operation for it) is not covered."""


class ExponentOverflow(KRError):
    """A q-exponent would need a denominator outside the admitted bound."""


class NotRepresentable(KRError):
    """A root of unity needed for the result is not a 24th root of unity."""


class FundamentalDataUnavailable(KRError):
    """No fundamental denominator is known for the requested node pair."""


class CoefficientNotMonomial(KRError):
    """An expanded coefficient is a sum of several distinct q-monomials."""

    def __init__(self, message: str, coefficients=None):
        super().__init__(message)
        self.coefficients = coefficients


class BaseMismatch(KRError):
    """Pochhammer products with different bases were combined."""


class UcoefDataUnavailable(KRError):
    """No closed universal-coefficient formula covers the request."""


class InvalidLetter(KRError):
    """A tableau letter is not part of the alphabet of the type."""


class EnumerationCapExceeded(KRError):
    """An enumeration would exceed the configured cap."""


class UnsupportedIdentity(KRError):
    """The requested T-system identity is not provided."""


class MismatchAgainstPrintedList(KRError):
    """A converted identity disagrees with the transcribed printed form."""


class CaseConditionViolated(KRError):
    """Parameters violate the side condition of a higher Dorey case."""


class NotASink(KRError):
    """A reflection was requested at a vertex that is not a sink."""

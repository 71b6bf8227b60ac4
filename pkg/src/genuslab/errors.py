"""Exception hierarchy shared by all genuslab modules."""


class GenusLabError(Exception):
    """Base class for every error raised by genuslab."""


class ProfileError(GenusLabError):
    """An exponent or root of unity is not representable in the active profile."""


class NonInvertibleSeries(GenusLabError):
    """Inversion of a series whose leading coefficient vanishes."""


class DegenerateRootFunction(GenusLabError):
    """A characteristic-class root function has a non-invertible constant term."""


class ThetaPoleError(GenusLabError):
    """A theta quotient has a vanishing denominator that is not regularized."""


class TranscendentalResidue(GenusLabError):
    """The net power of 2*pi*i of a theta quotient is nonzero."""


class ValidationError(GenusLabError):
    """Input data violates a structural contract."""


class KltError(ValidationError):
    """A divisor coefficient violates the Kawamata log-terminal bound."""


class IncompleteRingError(GenusLabError):
    """A monomial cannot be reduced by the ring's relation table."""


class InsufficientTruncation(GenusLabError):
    """The available q-expansion window is too short for the request."""

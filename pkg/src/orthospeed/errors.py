"""Exception types raised by orthospeed."""


class OrthospeedError(Exception):
    """Base class for all package errors."""


class DomainError(OrthospeedError, ValueError):
    """A parameter lies outside the domain where a formula is defined."""


class NotNormalized(OrthospeedError, ValueError):
    """A state violates its normalization (or structural) invariant."""


class ZeroPolynomial(OrthospeedError, ValueError):
    """Every coefficient of a polynomial is zero."""


class BothZero(OrthospeedError, ValueError):
    """Mean energy and energy spread both vanish, so no speed limit exists."""


class StateFormatError(OrthospeedError, ValueError):
    """A state interchange document could not be parsed."""

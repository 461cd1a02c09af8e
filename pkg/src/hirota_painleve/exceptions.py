"""Exception hierarchy.

``NumericalError`` subclasses signal a broken numerical invariant (CLI exit
code 1); ``InvalidInputError`` and ``RangeError`` are usage errors (exit
code 2).
"""


class InvalidInputError(ValueError):
    """Malformed or inadmissible input."""


class RangeError(InvalidInputError):
    """A query or parameter lies outside its admissible range."""


class NumericalError(RuntimeError):
    """Base class for failures of a numerical invariant."""


class IntegrationError(NumericalError):
    """Adaptive ODE integration could not reach the end of its interval."""

    def __init__(self, message, last_point=None, context=None):
        super().__init__(message)
        self.last_point = last_point
        self.context = dict(context or {})


class UnitarityError(NumericalError):
    """Scattering data violates ``|a|^2 - |b|^2 = 1`` beyond tolerance."""


class BlowUpError(NumericalError):
    """The PDE field became non-finite."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class BoundaryContaminationError(NumericalError):
    """Radiation reached the edges of the periodic domain."""

    def __init__(self, message, time=None, edge_amplitude=None):
        super().__init__(message)
        self.time = time
        self.edge_amplitude = edge_amplitude

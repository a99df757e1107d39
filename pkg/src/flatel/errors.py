"""Exception types shared across the library."""


class FlatelError(Exception):
    """Base class for all library errors."""


class ValidationError(FlatelError):
    """A surface, curve, or embedding failed structural validation."""


class TrivialCurve(FlatelError):
    """Raised when a curve component contracts to a point or a puncture."""


class NotPeriodic(FlatelError):
    """A direction admits a leaf that provably fails to close up."""


class Inconclusive(FlatelError):
    """A computation ran out of budget before reaching a verdict."""


class NotJSForCurve(FlatelError):
    """The cylinder decomposition does not realize the given curve system."""


class NotLoose(FlatelError):
    """A collection of embeddings is not jointly loose."""


class InputError(FlatelError):
    """Malformed user input (files, parameters, CLI arguments)."""

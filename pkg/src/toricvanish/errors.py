"""Shared exception types."""


class FanValidationError(ValueError):
    """A ray/cone description does not define a valid fan."""


class ScaleLimitError(RuntimeError):
    """An exact computation would exceed a documented size limit."""


class PreconditionError(ValueError):
    """An operation was called on input outside its stated domain."""


class StabilityError(RuntimeError):
    """A windowed enumeration changed under its margin check, so the window
    cannot be trusted to contain the whole finite answer."""

# core/exceptions.py

"""
Exception hierarchy for the quanton toolkit.

Everything derives from ``QuantonError`` (itself a ``ValueError``), so callers
that only care about "bad input" can keep catching ``ValueError``.
"""


class QuantonError(ValueError):
    """Base class for all errors raised by the core modules."""


class ConstraintError(QuantonError):
    """QuantonParams outside their ranges or violating D² + V² + C² = 1."""


class BasisError(QuantonError):
    """A polarization basis that is not orthonormal."""


class NormalizationError(QuantonError):
    """A state vector whose squared norm is not 1 within tolerance."""


class OperatorError(QuantonError):
    """An invalid density matrix or unitary."""


class RangeError(QuantonError):
    """A scalar argument outside its documented interval."""


class StateFileError(QuantonError):
    """A state file that cannot be parsed into a normalized state."""


class ConfigError(QuantonError):
    """An invalid settings file or environment override."""

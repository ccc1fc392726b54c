"""Exception hierarchy.

Structural problems (malformed inputs, unknown labels, bad files) and
mathematical failures (axioms that do not hold, inconsistent data) are kept
apart so the CLI can map them to distinct exit codes.
"""


class OrbifusionError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(OrbifusionError):
    """Malformed input: wrong shapes, duplicate or unknown labels, bad subgroups."""


class ParseError(StructuralError):
    """A data file failed strict parsing."""


class MathematicalError(OrbifusionError):
    """The input is well formed but violates a required identity."""


class IntegralityError(MathematicalError):
    """A quantity that must be a nonnegative integer is not, beyond tolerance."""


class InconsistentDataError(MathematicalError):
    """User-supplied auxiliary data contradicts an enforced sum rule or count."""

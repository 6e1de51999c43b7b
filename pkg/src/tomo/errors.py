"""Exception hierarchy shared by all tomo modules.

Two failure categories matter to callers: invalid input data
(``ValidationError``) and numerically unsafe requests such as
under-resolved grids (``NumericsError``).  The CLI maps them to distinct
exit codes.
"""


class TomoError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TomoError, ValueError):
    """Input violates a structural invariant (Hermiticity, symplecticity,
    quantum-number constraints, weight normalization, ...)."""


class NumericsError(TomoError, RuntimeError):
    """A computation was refused because it would be numerically unsound
    (Nyquist violation, under-resolved quadrature, insufficient grid
    support, non-oscillatory spectrum, ...)."""

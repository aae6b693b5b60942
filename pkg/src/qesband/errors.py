"""Exception types shared by the solvers and the CLI exit-code mapping."""


class QESBandError(Exception):
    """Base class for all library errors."""


class DomainError(QESBandError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class ConsistencyError(QESBandError, ArithmeticError):
    """An internal check failed (sector closure, eigenvalue reality)."""


class ConditioningError(ConsistencyError):
    """A least-squares fit was too ill-conditioned to trust."""


class NotAnOracleError(QESBandError, ValueError):
    """No closed form is available for the requested parameters."""


class DomainSizeError(DomainError):
    """A truncated-line solve leaked probability mass onto the box edges."""

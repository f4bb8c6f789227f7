class QdsLabError(Exception):
    """Base error for the library."""


class UsageError(QdsLabError):
    """Command line options that cannot be combined or resolved."""


class ValidationError(QdsLabError):
    """Input violates an invariant of the expected type."""


class MalformedInputError(ValidationError):
    """JSON input does not match the expected schema."""


class NonHermitianInputError(ValidationError):
    """Matrix is not Hermitian within hermitian_tol."""


class InvalidDensityError(ValidationError):
    """Matrix is not a density matrix (negative eigenvalue or trace != 1)."""


class DomainError(ValidationError):
    """Eigenvalue outside the domain of a spectral function."""


class BadExponentError(ValidationError):
    """Schatten exponent outside [1, inf]."""


class DimensionMismatchError(ValidationError):
    """Operands have different dimensions."""


class BadParameterError(ValidationError):
    """Constructor or tolerance parameter out of range."""


class BadRankError(ValidationError):
    """Truncation rank outside [1, dim)."""


class UnknownExampleError(ValidationError):
    """Requested example channel is not known."""


class NotCompletelyPositiveError(ValidationError):
    """Choi matrix has an eigenvalue below -psd_tol."""


class NotTracePreservingError(ValidationError):
    """Channel is not trace-preserving within tp_tol."""


class NotQdsError(ValidationError):
    """Channel is not quantum doubly stochastic."""


class NotMajorizedError(ValidationError):
    """Spectrum of rho is not majorized by the spectrum of sigma."""


class DecompositionStalledError(ValidationError):
    """No perfect matching left while residual mass remains."""


class PropertyViolation(QdsLabError):
    """A mathematical property failed on valid input."""

"""Exception types shared across the package.

The split matters for the CLI: configuration/domain problems exit with
code 2, numerical failures with code 3.
"""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class InfeasibleLimitError(ValueError):
    """A limiting-parameter combination no admissible model can attain."""


class InadmissiblePhaseError(ValueError):
    """Cyclical phase outside the admissible interval for the given d."""


class SingularityError(ValueError):
    """Spectral density requested exactly at a singular frequency."""


class InvalidPolynomialError(ValueError):
    """AR or MA polynomial with a root on or inside the unit disc."""


class NotPositiveDefiniteError(RuntimeError):
    """Covariance matrix not positive definite even after jitter."""


class QuadratureFailureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ConfigError(ValueError):
    """Malformed or inconsistent CLI configuration."""

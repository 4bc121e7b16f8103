"""Exception hierarchy shared across the package.

Two broad families matter for callers: configuration/validation problems
(``ConfigError`` and subclasses, CLI exit code 2) and numerical failures
(``NumericalError`` and subclasses, CLI exit code 3).
"""

from __future__ import annotations


class ChiralpointError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ChiralpointError):
    """Invalid configuration or parameters."""


class ParseError(ConfigError):
    """Input file could not be parsed at all."""


class SchemaError(ConfigError):
    """Parsed input does not match the documented schema."""


class ValidationError(ConfigError):
    """Parameters violate a physical invariant."""


class UnsupportedUnit(ConfigError):
    """Unit pair not supported by the converter."""


class DomainError(ConfigError):
    """Operation called outside its mathematical domain."""


class NumericalError(ChiralpointError):
    """A computation failed for numerical reasons."""


class NonPositiveLDOS(NumericalError):
    """Spectral density came out significantly negative (passivity broken)."""


class MissingDipoleMoment(ConfigError):
    """Purcell normalisation requested without a dipole moment."""


class NoPeak(NumericalError):
    """Spectrum has no interior maximum."""


class UnresolvedWidth(NumericalError):
    """Half-maximum crossings are not bracketed by the grid."""


class SingularResolvent(NumericalError):
    """(omega I - M) is singular at the requested frequency."""


class SingularAtDetuning(NumericalError):
    """Steady-state matrix is singular at the requested detuning."""


class AliasError(NumericalError):
    """Spectral grid too narrow to support the requested time dynamics."""


class StepError(NumericalError):
    """Requested integrator step is too large for the generator norm."""


class DefectiveMatrix(NumericalError):
    """Eigenvector matrix is numerically defective (near a degeneracy)."""


class NonConvergence(NumericalError):
    """Iterative fit did not converge within the iteration cap."""


class IllConditionedFit(NumericalError):
    """Fit covariance is too ill-conditioned to be meaningful."""


class IoError(ChiralpointError):
    """Export target could not be written."""

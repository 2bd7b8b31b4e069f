"""Exception types shared across the toolkit."""


class SpherepackError(Exception):
    """Base class for all toolkit errors."""


class NomeMismatch(SpherepackError):
    """Arithmetic attempted between series expanded in different nomes."""


class ZeroDivisionSeries(SpherepackError):
    """Division by the zero series."""


class DomainTooLow(SpherepackError):
    """Evaluation point below the configured Im(tau) floor."""


class TruncationInsufficient(SpherepackError):
    """Series tail estimate exceeds the requested tolerance."""


class NonRealValue(SpherepackError):
    """A value expected to be real came back with too large an imaginary part."""


class TailBoundViolated(SpherepackError):
    """Ray truncation cannot certify the requested tail tolerance."""


class PropagatedDomainError(SpherepackError):
    """Single-integral representation requested below its convergence radius."""


class NonpositiveFhat0(SpherepackError):
    """Cohn-Elkies bound requested with fhat(0) <= 0."""


class InsufficientGrid(SpherepackError):
    """Verification grid does not cover the region a check requires."""


class InsufficientTable(SpherepackError):
    """Radial table too short or too coarse for the requested transform."""


class ResourceGuard(SpherepackError):
    """Request exceeds a configured enumeration cap."""


class ConfigError(SpherepackError):
    """Malformed or unknown configuration input."""

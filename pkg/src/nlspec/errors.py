"""Exception hierarchy for the nlspec toolbox."""


class NlspecError(Exception):
    """Base class for all toolbox errors."""


class ConfigError(NlspecError):
    """Malformed or inconsistent analysis configuration."""


class DimMismatch(NlspecError):
    """Spec and grid dimensions disagree."""


class SymmetryViolation(NlspecError):
    """Sampled kernel breaks the Hermitian symmetry a(-x) = conj(a(x))."""


class NonRealTransform(NlspecError):
    """Transform of a Hermitian-symmetric kernel has a non-negligible imaginary part."""


class OffsetPotential(NlspecError):
    """Potential does not vanish at infinity (nonzero decay offset)."""


class CubeOutsideGrid(NlspecError):
    """Requested integration cube is not contained in the grid box."""


class MissingCoefficient(NlspecError):
    """A required local Fourier coefficient lies beyond the table truncation."""


class NotSmooth(NlspecError):
    """Derivatives requested for a kernel family without the needed smoothness."""


class DerivativesMissing(NlspecError):
    """Derivative table does not cover the requested orders."""


class WrapAroundRisk(NlspecError):
    """Test function too close to the box edge for the kernel's effective support."""


class GramSingular(NlspecError):
    """Basis Gram matrix numerically singular; basis rejected."""


class CapExceeded(NlspecError):
    """Dense discretization larger than the configured point cap."""


class HypothesisFailed(NlspecError):
    """A structural hypothesis of a criterion is violated by the inputs."""


class StabilityGuard(NlspecError):
    """Time step too large for the explicit scheme."""

    def __init__(self, message, suggested_dt=None):
        super().__init__(message)
        self.suggested_dt = suggested_dt


class DegenerateTrajectory(NlspecError):
    """Trajectory norms unusable for growth-rate extraction."""


class TailDivergence(NlspecError):
    """Second moments of the kernel do not converge on the sampled box."""

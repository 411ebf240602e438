"""Numerical spectral analysis of convolution operators with potentials.

The object of study is the bounded self-adjoint operator on L2(R^d)

    (L u)(x) = integral a(x - y) u(y) dy + V(x) u(x)

with an integrable Hermitian-symmetric kernel a and a real potential V
vanishing at infinity.  The toolbox computes the essential-spectrum segment
[mu0, mu1], evaluates sufficient criteria for discrete eigenvalues below mu0
with guaranteed count bounds, cross-validates them against Rayleigh-Ritz
certificates and a dense discretization oracle, and integrates the associated
population-density evolution.
"""

__version__ = "0.1.0"

from .errors import (
    CapExceeded,
    ConfigError,
    CubeOutsideGrid,
    DegenerateTrajectory,
    DerivativesMissing,
    DimMismatch,
    GramSingular,
    HypothesisFailed,
    MissingCoefficient,
    NlspecError,
    NonRealTransform,
    NotSmooth,
    OffsetPotential,
    StabilityGuard,
    SymmetryViolation,
    TailDivergence,
    WrapAroundRisk,
)
from .model import (
    Field,
    Grid,
    KernelSpec,
    PotentialSpec,
    SpectralSummary,
    find_global_min,
    l1_norm,
    locate_minimum,
    sample_kernel,
    sample_potential,
)
from .fourier import (
    DerivativeTable,
    LocalFourierTable,
    SpectralField,
    derivatives_at_zero,
    local_fourier_kernel,
    local_fourier_potential,
    nu_of_set,
    spectral_bounds,
    transform_kernel,
)
from .galerkin import (
    RitzResult,
    TestBasis,
    assemble,
    count_below,
    default_tol,
    dense_oracle,
    form_value,
    form_value_transform,
    fourier_mode_basis,
    grid_bump_basis,
    indicator_basis,
    polynomial_basis,
)
from .criteria import (
    BetaMatrix,
    CriterionReport,
    birman_schwinger_bound,
    check_analytic_infinite,
    check_dominance,
    check_essential,
    check_existence,
    check_flat_infinite,
    check_fourier_count,
    check_smooth_count,
    cross_validate,
    fit_flatness_exponent,
)
from .evolution import (
    EvolutionDriver,
    EvolutionState,
    diffusion_tensor,
    growth_rate,
    initial_bump,
    step,
)

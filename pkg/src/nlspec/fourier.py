"""Fourier transform, spectral bounds, local Fourier coefficients, derivatives.

Transform convention (fixed globally, all closed-form fixtures derive from
it): the forward transform carries no normalization,

    F[a](xi) = integral a(x) exp(-i x . xi) dx,

and the inverse carries (2pi)^-d.  Under this convention convolution by ``a``
is unitarily equivalent to multiplication by F[a], so the essential spectrum
of the full operator is [mu0, mu1] with mu0 = min(a_min, V_min),
mu1 = max(a_max, V_max), where a_min/a_max are the extrema of the transform.

On a midpoint grid the transform is approximated at the frequencies
xi_j = 2 pi j / L, j in [-n/2, n/2), by an FFT with a per-axis phase
correction exp(i pi j (1 - 1/n)) accounting for the half-cell shift; the
result is h^d-weighted midpoint quadrature, exact to rounding for smooth
rapidly decaying kernels.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    CubeOutsideGrid,
    DerivativesMissing,
    DimMismatch,
    MissingCoefficient,
    NonRealTransform,
    NotSmooth,
    OffsetPotential,
)
from .model import (
    Field,
    Grid,
    KernelSpec,
    PotentialSpec,
    SpectralSummary,
    locate_minimum,
    sample_kernel,
    sample_potential,
)

REALNESS_RTOL = 1e-8


@dataclass
class SpectralField:
    """Transform values on the shifted frequency grid xi_j = 2 pi j / L."""

    values: np.ndarray          # complex, ascending frequency order per axis
    freqs: np.ndarray           # 1d array of frequencies along one axis
    grid: Grid
    max_imag: float = 0.0

    @property
    def real(self) -> np.ndarray:
        return self.values.real


def transform_kernel(kernel: Field, grid: Grid) -> SpectralField:
    """h^d-weighted DFT of a midpoint-sampled kernel with phase correction.

    Raises NonRealTransform when the input is Hermitian-symmetric but the
    transform's imaginary residue exceeds tolerance (which would indicate a
    broken grid/phase pairing rather than a property of the kernel).
    """
    vals = kernel.values
    n = grid.points
    d = grid.dim
    F = np.fft.fftn(vals)
    jj = np.fft.fftfreq(n, d=1.0 / n)       # integer indices in FFT order
    phase = np.exp(1j * np.pi * jj * (1.0 - 1.0 / n))
    for ax in range(d):
        shape = [1] * d
        shape[ax] = n
        F = F * phase.reshape(shape)
    F = F * grid.cell_volume
    F = np.fft.fftshift(F)
    freqs = 2.0 * np.pi * np.fft.fftshift(jj) / grid.length

    scale = float(np.max(np.abs(F))) or 1.0
    max_imag = float(np.max(np.abs(F.imag)))
    reflected = np.conj(np.flip(vals))
    symmetric = np.max(np.abs(reflected - vals)) <= 1e-10 * (np.max(np.abs(vals)) or 1.0)
    if symmetric and max_imag > REALNESS_RTOL * scale:
        raise NonRealTransform(
            f"imaginary residue {max_imag:.3e} exceeds {REALNESS_RTOL:.0e} * {scale:.3e}"
        )
    return SpectralField(F, freqs, grid, max_imag=max_imag)


def _snap_and_clamp(lo: float, hi: float, delta_lo: float, delta_hi: float) -> tuple[float, float]:
    """Enforce lo <= 0 <= hi for extrema of a function decaying to zero.

    Values within the refinement-delta error bar of zero snap to exactly 0;
    the sign constraints (guaranteed for continuous data vanishing at
    infinity) are then enforced by clamping.
    """
    scale = max(abs(lo), abs(hi), 1e-300)
    floor_lo = max(1e-10 * scale, 2.0 * delta_lo)
    floor_hi = max(1e-10 * scale, 2.0 * delta_hi)
    if abs(lo) <= floor_lo:
        lo = 0.0
    if abs(hi) <= floor_hi:
        hi = 0.0
    return min(lo, 0.0), max(hi, 0.0)


def spectral_bounds(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                    grid: Grid, force: bool = False) -> SpectralSummary:
    """Transform and potential extrema, essential-spectrum and range endpoints.

    Extrema of the transform are taken over the frequency grid and refined by
    one grid-doubling Richardson pass: the box is doubled at fixed spacing and
    the two extrema are extrapolated first-order, 2*v(2L) - v(L), which
    cancels the O(1/L) truncation tail of heavy-tailed kernels and is a no-op
    for light tails.  For a vanishing-at-infinity pair the invariants
    a_min <= 0 <= a_max and V_min <= 0 <= V_max are enforced afterwards.

    Raises OffsetPotential when the potential has a nonzero decay offset,
    unless `force` is set (the caller then owns the interpretation).
    """
    if potential_spec.decay_offset != 0.0 and not force:
        raise OffsetPotential(
            f"potential tends to {potential_spec.decay_offset} at infinity; "
            "essential-spectrum bounds assume decay to zero (pass force=True to override)"
        )
    if kernel_spec.dim != grid.dim or potential_spec.dim != grid.dim:
        raise DimMismatch("kernel/potential/grid dimensions disagree")

    fine = grid.refined(2)
    sf1 = transform_kernel(sample_kernel(kernel_spec, grid), grid)
    sf2 = transform_kernel(sample_kernel(kernel_spec, fine), fine)
    amin1, amax1 = float(sf1.real.min()), float(sf1.real.max())
    amin2, amax2 = float(sf2.real.min()), float(sf2.real.max())
    a_min = 2.0 * amin2 - amin1
    a_max = 2.0 * amax2 - amax1

    pot1 = sample_potential(potential_spec, grid)
    pot2 = sample_potential(potential_spec, fine)
    _, v_min = locate_minimum(potential_spec, grid, potential=pot1)
    vmax1 = float(pot1.values.max())
    vmax2 = float(pot2.values.max())
    v_max = 2.0 * vmax2 - vmax1

    if potential_spec.decay_offset == 0.0:
        a_min, a_max = _snap_and_clamp(a_min, a_max, abs(amin2 - amin1), abs(amax2 - amax1))
        v_min, v_max = _snap_and_clamp(v_min, v_max, 0.0, abs(vmax2 - vmax1))

    mu0 = min(a_min, v_min)
    mu1 = max(a_max, v_max)
    return SpectralSummary(
        a_min=a_min, a_max=a_max, v_min=v_min, v_max=v_max,
        mu0=mu0, mu1=mu1, range_lo=a_min + v_min, range_hi=a_max + v_max,
    )


# ---------------------------------------------------------------------------
# local Fourier coefficients


def _normalize_index(n, dim: int) -> tuple:
    if isinstance(n, (int, np.integer)):
        if dim != 1:
            raise ValueError("scalar index only valid in one dimension")
        return (int(n),)
    t = tuple(int(c) for c in n)
    if len(t) != dim:
        raise ValueError(f"index {n} has wrong dimension (expected {dim})")
    return t


@dataclass
class LocalFourierTable:
    """Kernel coefficients a_n over the cube Q_2r(0) and shifted-potential
    coefficients V_n over Q_r(0), truncated at |n|_inf <= n_max.

        a_n = (2r)^-d  integral_{Q_2r(0)} a(x) exp(-(i pi / r) n.x) dx
        V_n = integral_{Q_r(0)} (V(x + x0) - V_min) exp((2 i pi / r) n.x) dx

    The integration cube for V_n is Q_r(0) in the shifted variable, the
    convention under which the companion Parseval identity on Q_r(x0) holds.
    a_n are real for Hermitian-symmetric kernels (the imaginary residue of the
    quadrature is recorded); conj(V_-n) = V_n is enforced by averaging.
    """

    r: float
    x0: np.ndarray
    n_max: int
    dim: int
    a_coeffs: Optional[dict] = None
    v_coeffs: Optional[dict] = None
    v_min: Optional[float] = None
    a_imag_residue: float = 0.0
    v_hermitian_defect: float = 0.0

    def a(self, n) -> float:
        key = _normalize_index(n, self.dim)
        if self.a_coeffs is None or key not in self.a_coeffs:
            raise MissingCoefficient(f"a_{key} not in table (n_max={self.n_max})")
        return self.a_coeffs[key]

    def v(self, n) -> complex:
        key = _normalize_index(n, self.dim)
        if self.v_coeffs is None or key not in self.v_coeffs:
            raise MissingCoefficient(f"V_{key} not in table (n_max={self.n_max})")
        return self.v_coeffs[key]

    def merge(self, other: "LocalFourierTable") -> "LocalFourierTable":
        if (self.r, self.n_max, self.dim) != (other.r, other.n_max, other.dim):
            raise ValueError("tables built with different cube parameters")
        return LocalFourierTable(
            r=self.r, x0=self.x0 if self.v_coeffs is not None else other.x0,
            n_max=self.n_max, dim=self.dim,
            a_coeffs=self.a_coeffs or other.a_coeffs,
            v_coeffs=self.v_coeffs or other.v_coeffs,
            v_min=self.v_min if self.v_min is not None else other.v_min,
            a_imag_residue=max(self.a_imag_residue, other.a_imag_residue),
            v_hermitian_defect=max(self.v_hermitian_defect, other.v_hermitian_defect),
        )


def _cube_coefficients(fun: Callable, side: float, n_max: int, dim: int,
                       mode_factor: float, cells: int) -> np.ndarray:
    """Tensor midpoint quadrature of fun against exp(i * mode_factor * n.x)
    over [-side/2, side/2]^d, all |n|_inf <= n_max.

    The midpoint rule with m cells integrates the pure modes exactly
    (discrete orthogonality) for |mode difference| < m, so flat and
    single-mode fixtures come out exact.
    """
    step = side / cells
    y = -side / 2 + (np.arange(cells) + 0.5) * step
    mesh = np.meshgrid(*([y] * dim), indexing="ij")
    vals = np.asarray(fun(*mesh), dtype=complex)
    ns = np.arange(-n_max, n_max + 1)
    phase = np.exp(1j * mode_factor * np.outer(ns, y)) * step
    out = vals
    for _ in range(dim):
        out = np.tensordot(out, phase, axes=([0], [1]))
    return out  # shape (2*n_max+1,)*dim, index order matches axis order


def local_fourier_kernel(kernel_spec: KernelSpec, r: float, n_max: int,
                         grid: Grid) -> LocalFourierTable:
    """Kernel coefficients a_n over Q_2r(0); requires the cube inside the box."""
    if r <= 0:
        raise ValueError("cube size r must be positive")
    if 2 * r > grid.length:
        raise CubeOutsideGrid(f"Q_2r(0) with r={r} exceeds the grid box (L={grid.length})")
    if kernel_spec.dim != grid.dim:
        raise DimMismatch("kernel/grid dimensions disagree")
    d = grid.dim
    cells = max(128, 4 * n_max + 2, int(math.ceil(2 * r / grid.spacing)))
    coeffs = _cube_coefficients(
        kernel_spec.evaluate, 2.0 * r, n_max, d, mode_factor=-np.pi / r, cells=cells
    ) / (2.0 * r) ** d
    residue = float(np.max(np.abs(coeffs.imag)))
    table = {}
    for idx in itertools.product(range(2 * n_max + 1), repeat=d):
        key = tuple(i - n_max for i in idx)
        table[key] = float(coeffs[idx].real)
    return LocalFourierTable(r=r, x0=np.zeros(d), n_max=n_max, dim=d,
                             a_coeffs=table, a_imag_residue=residue)


def local_fourier_potential(potential_spec: PotentialSpec, x0, r: float,
                            n_max: int, grid: Grid,
                            v_min: Optional[float] = None) -> LocalFourierTable:
    """Shifted-potential coefficients V_n over Q_r(0); v_min defaults to V(x0)."""
    if r <= 0:
        raise ValueError("cube size r must be positive")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if np.max(np.abs(x0)) + r / 2 > grid.length / 2:
        raise CubeOutsideGrid(f"Q_r({x0}) with r={r} exceeds the grid box")
    if potential_spec.dim != grid.dim:
        raise DimMismatch("potential/grid dimensions disagree")
    d = grid.dim
    if v_min is None:
        v_min = float(potential_spec.evaluate(*[np.asarray(c) for c in x0]))

    def shifted(*pts):
        return potential_spec.evaluate(*[p + c for p, c in zip(pts, x0)]) - v_min

    cells = max(128, 4 * n_max + 2, int(math.ceil(r / grid.spacing)))
    coeffs = _cube_coefficients(shifted, r, n_max, d,
                                mode_factor=2.0 * np.pi / r, cells=cells)
    table = {}
    for idx in itertools.product(range(2 * n_max + 1), repeat=d):
        key = tuple(i - n_max for i in idx)
        table[key] = complex(coeffs[idx])
    defect = 0.0
    for key, val in list(table.items()):
        neg = tuple(-c for c in key)
        if neg in table:
            avg = 0.5 * (val + np.conj(table[neg]))
            defect = max(defect, abs(val - np.conj(table[neg])))
            table[key] = complex(avg)
    return LocalFourierTable(r=r, x0=x0, n_max=n_max, dim=d,
                             v_coeffs=table, v_min=v_min, v_hermitian_defect=defect)


def nu_of_set(table: LocalFourierTable, J) -> float:
    """nu_J = r^-d max_{n in J} sum_{m in J} |V_{n-m}|."""
    keys = [_normalize_index(n, table.dim) for n in J]
    if not keys:
        raise ValueError("index set J must be non-empty")
    best = 0.0
    for n in keys:
        row = 0.0
        for m in keys:
            diff = tuple(a - b for a, b in zip(n, m))
            if max(abs(c) for c in diff) > table.n_max:
                raise MissingCoefficient(
                    f"V_{diff} needed for nu over J but table truncates at {table.n_max}"
                )
            row += abs(table.v(diff))
        best = max(best, row)
    return best / table.r ** table.dim


# ---------------------------------------------------------------------------
# derivatives at the origin


@dataclass
class DerivativeTable:
    """Partial derivatives of the kernel at 0, all multi-indices |n| <= order_cap."""

    order_cap: int
    dim: int
    entries: dict = field(default_factory=dict)
    provenance: str = "analytic"

    def deriv(self, n) -> float:
        key = _normalize_index(n, self.dim)
        if key not in self.entries:
            raise DerivativesMissing(
                f"derivative {key} not available (order cap {self.order_cap})"
            )
        return self.entries[key]

    def has(self, n) -> bool:
        try:
            return _normalize_index(n, self.dim) in self.entries
        except ValueError:
            return False


def fd_weights(nodes: np.ndarray, z: float, m: int) -> np.ndarray:
    """Finite-difference weights for derivatives 0..m at z (Fornberg recursion)."""
    nodes = np.asarray(nodes, dtype=float)
    k = len(nodes)
    c = np.zeros((k, m + 1))
    c1 = 1.0
    c4 = nodes[0] - z
    c[0, 0] = 1.0
    for i in range(1, k):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - z
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for p in range(mn, 0, -1):
                    c[i, p] = c1 * (p * c[i - 1, p - 1] - c5 * c[i - 1, p]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for p in range(mn, 0, -1):
                c[j, p] = (c4 * c[j, p] - p * c[j, p - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def _fd_step(order: int) -> float:
    # truncation/round-off balance for a fourth-order stencil
    return float(np.finfo(float).eps ** (1.0 / (order + 4)))


def _fd_partial(fun: Callable, n: tuple, step_override: Optional[float] = None) -> float:
    """Mixed partial derivative at 0 via tensor-composed 4th-order central stencils."""
    d = len(n)
    axes_nodes, axes_weights = [], []
    for order in n:
        if order == 0:
            axes_nodes.append(np.array([0.0]))
            axes_weights.append(np.array([1.0]))
            continue
        h = step_override if step_override is not None else _fd_step(order)
        half = (order - 1) // 2 + 1 + 2    # minimal width + 2 extra nodes: order 4
        nodes = np.arange(-half, half + 1) * h
        axes_nodes.append(nodes)
        axes_weights.append(fd_weights(nodes, 0.0, order))
    mesh = np.meshgrid(*axes_nodes, indexing="ij")
    vals = np.asarray(fun(*mesh), dtype=float)
    for ax in range(d - 1, -1, -1):
        vals = np.tensordot(vals, axes_weights[ax], axes=([ax], [0]))
    return float(vals)


def _analytic_axis_factors(spec: KernelSpec, max_order: int):
    """Per-axis derivative factors for separable analytic families, or None."""
    fam = spec.family
    if fam in ("gaussian", "neg_gaussian"):
        amp = spec.params[0] if spec.params else 1.0
        width = spec.params[1] if len(spec.params) > 1 else 1.0
        sign = -1.0 if fam == "neg_gaussian" else 1.0

        def factor(k):
            if k % 2:
                return 0.0
            m = k // 2
            return (-1.0) ** m * math.factorial(k) / (math.factorial(m) * width ** k)

        return sign * amp, [factor(k) for k in range(max_order + 1)]
    if fam == "cauchy_product":
        amp = spec.params[0] if spec.params else 1.0

        def factor(k):
            if k % 2:
                return 0.0
            return (-1.0) ** (k // 2) * math.factorial(k)

        return -amp, [factor(k) for k in range(max_order + 1)]
    return None


def derivatives_at_zero(kernel_spec: KernelSpec, N: int,
                        method: str = "auto") -> DerivativeTable:
    """Derivative table d^n a(0) for |n| <= 2N.

    Analytic formulas are used for the families that admit them; otherwise
    4th-order central finite differences with per-order steps
    h_k = eps^(1/(k+4)).  The exponential family is not differentiable at 0
    and is rejected; tabulated data is rejected above order 2.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    cap = 2 * N
    d = kernel_spec.dim
    fam = kernel_spec.family

    if fam == "exponential":
        raise NotSmooth("exponential kernel e^{-|z|} has no derivatives at 0")
    if fam == "tabulated" and cap > 2:
        raise NotSmooth("tabulated kernels support derivatives up to order 2 only")

    indices = [n for n in itertools.product(range(cap + 1), repeat=d) if sum(n) <= cap]

    analytic = _analytic_axis_factors(kernel_spec, cap)
    use_analytic = method != "finite_difference" and (
        analytic is not None or fam == "user_taylor"
    )
    entries = {}
    if use_analytic:
        if fam == "user_taylor":
            coeffs = kernel_spec.params[1:]
            for n in indices:
                k = n[0]
                if k % 2 or k // 2 >= len(coeffs):
                    entries[n] = 0.0
                else:
                    entries[n] = math.factorial(k) * coeffs[k // 2]
        else:
            pref, factors = analytic
            for n in indices:
                val = pref
                for k in n:
                    val *= factors[k]
                entries[n] = float(val)
        prov = "analytic"
    else:
        if method == "analytic":
            raise NotSmooth(f"no analytic derivative formulas for family {fam!r}")
        step = None
        if fam == "tabulated":
            step = 2.0 * kernel_spec.data_box / max(kernel_spec.data.shape[0] - 1, 1)

        def fun(*pts):
            return np.real(kernel_spec.evaluate(*pts))

        for n in indices:
            entries[n] = _fd_partial(fun, n, step_override=step)
        prov = "finite_difference"
    return DerivativeTable(order_cap=cap, dim=d, entries=entries, provenance=prov)

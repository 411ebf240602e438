"""Kernels, potentials, grids and sampled fields.

The operator under study acts on L2(R^d) as convolution by an integrable
kernel ``a`` plus multiplication by a real potential ``V`` that decays at
infinity.  Kernels must satisfy the Hermitian symmetry a(-x) = conj(a(x)),
which makes the operator self-adjoint.  This module holds the symbolic
descriptions of the builtin kernel/potential families, the cell-centered
sampling grid, and the basic sampling and norm operations everything else
is built on.

Grids are midpoint (cell-centered): x_k = -L/2 + (k + 1/2) h with h = L/n.
A midpoint grid is symmetric about the origin, never contains the origin
itself (which sidesteps removable singularities like exp(-1/x^2)), and
makes sums second-order quadratures of integrals over the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DimMismatch, SymmetryViolation

KERNEL_FAMILIES = (
    "cauchy_product",
    "gaussian",
    "exponential",
    "neg_gaussian",
    "tabulated",
    "user_taylor",
)

POTENTIAL_FAMILIES = (
    "gaussian_well",
    "plateau_well",
    "power_well",
    "sqrt_well",
    "superflat_well",
    "tabulated",
)

SYMMETRY_RTOL = 1e-10


@dataclass(frozen=True)
class Grid:
    """Cubic cell-centered sampling grid: n points per axis on [-L/2, L/2]^d."""

    dim: int
    length: float
    points: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("grid dimension must be positive")
        if self.points < 2:
            raise ValueError("grid needs at least two points per axis")
        if self.length <= 0:
            raise ValueError("grid length must be positive")

    @property
    def spacing(self) -> float:
        return self.length / self.points

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim

    def axis(self) -> np.ndarray:
        """Midpoint coordinates along one axis."""
        h = self.spacing
        return -self.length / 2 + (np.arange(self.points) + 0.5) * h

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        ax = self.axis()
        return np.meshgrid(*([ax] * self.dim), indexing="ij")

    def refined(self, box_factor: int = 2) -> "Grid":
        """Grid with the box enlarged by `box_factor` at the same spacing."""
        return Grid(self.dim, self.length * box_factor, self.points * box_factor)


@dataclass
class Field:
    """Values sampled on a grid, tagged by role (kernel/potential/state/transform)."""

    values: np.ndarray
    grid: Grid
    role: str = "state"

    def __post_init__(self):
        expected = (self.grid.points,) * self.grid.dim
        if self.values.shape != expected:
            raise ValueError(
                f"field shape {self.values.shape} does not match grid shape {expected}"
            )


@dataclass
class SpectralSummary:
    """Extrema of the transform and the potential, and the spectral segments.

    mu0/mu1 bound the essential spectrum [mu0, mu1]; range_lo/range_hi bound
    the full spectrum; discrete eigenvalues can live only in
    [range_lo, mu0) and (mu1, range_hi].
    """

    a_min: float
    a_max: float
    v_min: float
    v_max: float
    mu0: float
    mu1: float
    range_lo: float
    range_hi: float

    def as_dict(self) -> dict:
        return {
            "a_min": self.a_min,
            "a_max": self.a_max,
            "v_min": self.v_min,
            "v_max": self.v_max,
            "mu0": self.mu0,
            "mu1": self.mu1,
            "range": [self.range_lo, self.range_hi],
        }


def _radial(pts: Sequence[np.ndarray]) -> np.ndarray:
    sq = pts[0] ** 2
    for p in pts[1:]:
        sq = sq + p ** 2
    return np.sqrt(sq)


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 1 for t <= 0, 0 for t >= 1."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(t < 1.0, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
        b = np.where(t > 0.0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
    return a / (a + b)


def _multilinear(data: np.ndarray, box: float, pts: Sequence[np.ndarray]) -> np.ndarray:
    """Multilinear interpolation of node-sampled data on [-box/2, box/2]^d,
    zero-extended outside the bounding box."""
    d = len(pts)
    shape = np.broadcast(*pts).shape if d > 1 else pts[0].shape
    m = data.shape[0]
    step = box / (m - 1)
    out = np.zeros(shape, dtype=data.dtype)
    idx = []
    frac = []
    inside = np.ones(shape, dtype=bool)
    for p in pts:
        t = (np.asarray(p) + box / 2) / step
        inside &= (t >= 0) & (t <= m - 1)
        i0 = np.clip(np.floor(t).astype(int), 0, m - 2)
        idx.append(i0)
        frac.append(np.clip(t - i0, 0.0, 1.0))
    for corner in range(2 ** d):
        w = np.ones(shape)
        sel = []
        for ax in range(d):
            bit = (corner >> ax) & 1
            sel.append(idx[ax] + bit)
            w = w * (frac[ax] if bit else (1.0 - frac[ax]))
        out = out + w * data[tuple(sel)]
    return np.where(inside, out, 0.0)


@dataclass
class KernelSpec:
    """Symbolic description of a convolution kernel.

    params by family:
      cauchy_product: (amplitude,)          a(z) = -amp * prod_i 1/(1+z_i^2)
      gaussian:       (amplitude, width)    a(z) = amp * exp(-|z/width|^2)
      neg_gaussian:   (amplitude, width)    a(z) = -amp * exp(-|z/width|^2)
      exponential:    (amplitude, width)    a(z) = amp * exp(-|z|/width)
      user_taylor:    (radius, c0, c2, ...) even polynomial sum c_{2j} z^{2j}
                      times a smooth cutoff supported in |z| <= radius (1d only)
      tabulated:      () with `data` samples on [-data_box/2, data_box/2]^d,
                      multilinearly interpolated, zero outside
    """

    family: str
    params: tuple = ()
    dim: int = 1
    data: Optional[np.ndarray] = None
    data_box: Optional[float] = None

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        self.params = tuple(float(p) for p in self.params)
        if self.family == "tabulated":
            if self.data is None or self.data_box is None:
                raise ValueError("tabulated kernel needs data and data_box")
            self.data = np.asarray(self.data)
        if self.family == "user_taylor":
            if self.dim != 1:
                raise ValueError("user_taylor kernels are one-dimensional")
            if len(self.params) < 2:
                raise ValueError("user_taylor needs (radius, c0, ...)")

    def evaluate(self, *pts: np.ndarray) -> np.ndarray:
        """Kernel values at arbitrary points (one coordinate array per axis)."""
        if len(pts) != self.dim:
            raise DimMismatch(
                f"kernel is {self.dim}-dimensional, got {len(pts)} coordinates"
            )
        pts = [np.asarray(p, dtype=float) for p in pts]
        fam = self.family
        if fam == "cauchy_product":
            amp = self.params[0] if self.params else 1.0
            out = np.ones_like(pts[0])
            for p in pts:
                out = out / (1.0 + p ** 2)
            return -amp * out
        if fam in ("gaussian", "neg_gaussian"):
            amp = self.params[0] if self.params else 1.0
            width = self.params[1] if len(self.params) > 1 else 1.0
            r2 = sum((p / width) ** 2 for p in pts)
            val = amp * np.exp(-r2)
            return -val if fam == "neg_gaussian" else val
        if fam == "exponential":
            amp = self.params[0] if self.params else 1.0
            width = self.params[1] if len(self.params) > 1 else 1.0
            return amp * np.exp(-_radial(pts) / width)
        if fam == "user_taylor":
            radius = self.params[0]
            coeffs = self.params[1:]
            z = pts[0]
            poly = np.zeros_like(z)
            for j, c in enumerate(coeffs):
                poly = poly + c * z ** (2 * j)
            # cutoff == 1 on |z| <= radius/2 so derivatives at 0 are the polynomial's
            cut = _smooth_step(2.0 * np.abs(z) / radius - 1.0)
            return poly * cut
        # tabulated
        return _multilinear(self.data, self.data_box, pts)


@dataclass
class PotentialSpec:
    """Symbolic description of a potential.

    params by family:
      gaussian_well:  (depth, width)         V = -depth * exp(-|x/width|^2)
      plateau_well:   (depth, inner, outer)  -depth on |x|_inf <= inner, linear
                                             ramp to 0 on inner <= |x|_inf <= outer
      power_well:     (depth, exponent)      V = -depth * (1 - |x|^p) on |x| <= 1
      sqrt_well:      (depth,)               power_well with p = 1/2
      superflat_well: (depth,)               V = exp(-1/|x|^2) - depth; tends to
                                             1 - depth at infinity (decay_offset)
      tabulated:      () with `data`, `data_box`

    x0_hint is the claimed global-minimum location; decay_offset is the limit
    of V at infinity (0 for families that genuinely vanish there).
    """

    family: str
    params: tuple = ()
    dim: int = 1
    x0_hint: Optional[tuple] = None
    decay_offset: float = 0.0
    data: Optional[np.ndarray] = None
    data_box: Optional[float] = None

    def __post_init__(self):
        if self.family not in POTENTIAL_FAMILIES:
            raise ValueError(f"unknown potential family {self.family!r}")
        self.params = tuple(float(p) for p in self.params)
        if self.family == "tabulated":
            if self.data is None or self.data_box is None:
                raise ValueError("tabulated potential needs data and data_box")
            self.data = np.asarray(self.data, dtype=float)
        elif self.family == "superflat_well":
            depth = self.params[0] if self.params else 5.0
            self.decay_offset = 1.0 - depth
        else:
            self.decay_offset = 0.0
        if self.x0_hint is None and self.family != "tabulated":
            self.x0_hint = (0.0,) * self.dim
        if self.x0_hint is not None:
            self.x0_hint = tuple(float(c) for c in self.x0_hint)

    def evaluate(self, *pts: np.ndarray) -> np.ndarray:
        if len(pts) != self.dim:
            raise DimMismatch(
                f"potential is {self.dim}-dimensional, got {len(pts)} coordinates"
            )
        pts = [np.asarray(p, dtype=float) for p in pts]
        fam = self.family
        if fam == "gaussian_well":
            depth = self.params[0]
            width = self.params[1] if len(self.params) > 1 else 1.0
            r2 = sum((p / width) ** 2 for p in pts)
            return -depth * np.exp(-r2)
        if fam == "plateau_well":
            depth, inner, outer = self.params[:3]
            sup = np.abs(pts[0])
            for p in pts[1:]:
                sup = np.maximum(sup, np.abs(p))
            ramp = -depth * (outer - sup) / (outer - inner)
            return np.where(sup <= inner, -depth, np.where(sup <= outer, ramp, 0.0))
        if fam in ("power_well", "sqrt_well"):
            depth = self.params[0]
            p_exp = self.params[1] if fam == "power_well" and len(self.params) > 1 else 0.5
            r = _radial(pts)
            inside = r <= 1.0
            return np.where(inside, -depth * (1.0 - r ** p_exp), 0.0)
        if fam == "superflat_well":
            depth = self.params[0] if self.params else 5.0
            r2 = sum(p ** 2 for p in pts)
            with np.errstate(divide="ignore"):
                val = np.where(r2 > 0, np.exp(-1.0 / np.maximum(r2, 1e-300)), 0.0)
            return val - depth
        return _multilinear(self.data, self.data_box, pts)

    def flatness(self) -> tuple[Optional[float], Optional[float]]:
        """(alpha, c0) with V(x) - V_min ~ c0 |x - x0|^alpha near the minimum.

        alpha = inf means flatter than any power; (None, None) means unknown.
        """
        fam = self.family
        if fam == "gaussian_well":
            depth = self.params[0]
            width = self.params[1] if len(self.params) > 1 else 1.0
            return 2.0, depth / width ** 2
        if fam == "power_well":
            p_exp = self.params[1] if len(self.params) > 1 else 0.5
            return p_exp, self.params[0]
        if fam == "sqrt_well":
            return 0.5, self.params[0]
        if fam in ("plateau_well", "superflat_well"):
            return math.inf, 0.0
        return None, None


def sample_kernel(spec: KernelSpec, grid: Grid) -> Field:
    """Sample a kernel on the grid and verify Hermitian symmetry.

    The midpoint grid is symmetric about 0, so a(-x_k) runs through the same
    sample set reversed; the symmetry check is exact for the builtin families
    and catches asymmetric tabulated data.
    """
    if spec.dim != grid.dim:
        raise DimMismatch(f"kernel dim {spec.dim} != grid dim {grid.dim}")
    vals = spec.evaluate(*grid.meshgrid())
    scale = float(np.max(np.abs(vals))) or 1.0
    reflected = np.conj(np.flip(vals))
    defect = float(np.max(np.abs(reflected - vals)))
    if defect > SYMMETRY_RTOL * scale:
        raise SymmetryViolation(
            f"max |a(-x) - conj(a(x))| = {defect:.3e} exceeds {SYMMETRY_RTOL:.0e} * {scale:.3e}"
        )
    return Field(vals, grid, role="kernel")


def sample_potential(spec: PotentialSpec, grid: Grid) -> Field:
    if spec.dim != grid.dim:
        raise DimMismatch(f"potential dim {spec.dim} != grid dim {grid.dim}")
    vals = np.real_if_close(spec.evaluate(*grid.meshgrid()))
    if np.iscomplexobj(vals):
        raise ValueError("potential values must be real")
    return Field(np.asarray(vals, dtype=float), grid, role="potential")


def find_global_min(potential: Field, grid: Grid,
                    hint: Optional[Sequence[float]] = None) -> tuple[np.ndarray, float]:
    """Locate the global minimum of a sampled potential on its grid.

    Without a hint the minimal sample wins, ties broken by the
    lexicographically smallest index.  With a hint, a steepest-descent walk
    over grid neighbours starts from the node nearest the hint; the walk's
    endpoint is returned when its value matches the sampled minimum within
    1e-9 * (1 + |min|), otherwise the global argmin is the fallback.
    """
    vals = potential.values
    flat = np.argmin(vals.reshape(-1))
    idx = np.unravel_index(flat, vals.shape)
    grid_min = float(vals[idx])
    ax = grid.axis()
    grid_point = np.array([ax[i] for i in idx])
    if hint is None:
        return grid_point, grid_min

    hint = np.asarray(hint, dtype=float)
    cur = tuple(int(np.argmin(np.abs(ax - c))) for c in hint)
    while True:
        best = cur
        for axis_i in range(grid.dim):
            for step in (-1, 1):
                cand = list(cur)
                cand[axis_i] += step
                if 0 <= cand[axis_i] < grid.points:
                    cand = tuple(cand)
                    if vals[cand] < vals[best]:
                        best = cand
        if best == cur:
            break
        cur = best
    descended = float(vals[cur])
    tol = 1e-9 * (1.0 + abs(grid_min))
    if descended <= grid_min + tol:
        return np.array([ax[i] for i in cur]), descended
    return grid_point, grid_min


def locate_minimum(spec: PotentialSpec, grid: Grid,
                   potential: Optional[Field] = None) -> tuple[np.ndarray, float]:
    """Global minimum point and value, exact where the family permits.

    The grid minimum is computed first; when an x0_hint is present and its
    exact value V(x0_hint) is consistent with the sampled minimum, the hint
    point and its exact value are used.  This keeps plateau cubes centered at
    the true center and gives exact minima (e.g. -2.0 for a depth-2 well)
    where midpoint samples are off by O(h^2).
    """
    if potential is None:
        potential = sample_potential(spec, grid)
    point, value = find_global_min(potential, grid, hint=spec.x0_hint)
    if spec.x0_hint is not None:
        hint = np.asarray(spec.x0_hint, dtype=float)
        hint_val = float(spec.evaluate(*[np.asarray(c) for c in hint]))
        if hint_val <= value + 1e-9 * (1.0 + abs(value)):
            return hint, hint_val
    return np.asarray(point, dtype=float), value


def l1_norm(field: Field, grid: Grid) -> float:
    """Discrete L1 norm h^d * sum |values|; bounds the convolution operator norm."""
    return float(grid.cell_volume * np.sum(np.abs(field.values)))

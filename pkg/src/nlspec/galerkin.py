"""Quadratic form, Rayleigh-Ritz certification, and the dense oracle.

The quadratic form of the operator is

    f[u] = (A u, u) + (V u, u),   (A u)(x) = integral a(x - y) u(y) dy,

evaluated with h^d midpoint weights per sum and the convolution applied as a
zero-padded linear (non-circular) discrete convolution on the difference
lattice (j - k) h.  By the minimax principle, every Ritz value of the form
below mu0 certifies one discrete eigenvalue of the operator below mu0, up to
quadrature error.

The dense oracle is the brute-force compression

    M_jk = h^d a(x_j - x_k) + V(x_j) delta_jk,

whose eigenvalues approximate the spectrum of the operator restricted to the
box.  Ritz matrices are assembled against exactly this discretization, so
certified counts are dominated by oracle counts at matched resolution
(Cauchy interlacing) by construction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import CapExceeded, GramSingular, WrapAroundRisk
from .model import Field, Grid, KernelSpec, PotentialSpec, sample_potential
from .fourier import spectral_bounds

HERMITICITY_RTOL = 1e-10
GRAM_COND_LIMIT = 1e12
DENSE_CAP = 4096


def default_tol(mu0: float) -> float:
    """Certification slack below mu0 for exact-form Ritz values."""
    return 1e-9 * (1.0 + abs(mu0))


# ---------------------------------------------------------------------------
# lattice convolution


class LatticeConvolver:
    """Zero-padded FFT convolution with the kernel on the difference lattice.

    Midpoint coordinates differ by integer multiples of h, so the convolution
    needs kernel values at offsets m*h, |m| <= n-1, which are sampled from the
    symbolic spec (exact for builtin families).  The default padding factor 2
    makes the circular convolution exactly linear over the box, so there is no
    wrap-around at all; smaller factors leave kernel mass at offsets that
    alias back into the box, which `aliasing_fraction` quantifies.
    """

    def __init__(self, kernel_spec: KernelSpec, grid: Grid, pad_factor: float = 2.0):
        if pad_factor < 1.0:
            raise ValueError("pad_factor must be at least 1")
        self.grid = grid
        n = grid.points
        d = grid.dim
        P = int(math.ceil(pad_factor * n))
        offs = np.fft.fftfreq(P, d=1.0 / P).astype(int) * grid.spacing
        mesh = np.meshgrid(*([offs] * d), indexing="ij")
        self.lattice = np.asarray(kernel_spec.evaluate(*mesh))
        self.fker = np.fft.fftn(self.lattice)
        self.P = P
        sup = np.abs(mesh[0])
        for m in mesh[1:]:
            sup = np.maximum(sup, np.abs(m))
        self._sup = sup
        self._absmass = float(np.sum(np.abs(self.lattice)))

    def apply(self, u: np.ndarray) -> np.ndarray:
        """h^d-weighted convolution of u (shape = grid shape)."""
        d = self.grid.dim
        n = self.grid.points
        fu = np.fft.fftn(u, s=(self.P,) * d, axes=tuple(range(d)))
        out = np.fft.ifftn(fu * self.fker)
        out = out[(slice(0, n),) * d]
        if not np.iscomplexobj(u):
            out = out.real
        return out * self.grid.cell_volume

    def aliasing_fraction(self) -> float:
        """Fraction of lattice |a| mass at offsets that wrap into the box.

        Couplings a((j-k)h) with |j-k| <= n-1 pick up spurious periodic images
        at offsets beyond (P - n + 1) cells; with P >= 2n - 1 that range is
        empty and the convolution is exactly linear.
        """
        if self._absmass == 0.0:
            return 0.0
        margin = (self.P - self.grid.points + 1) * self.grid.spacing
        return float(np.sum(np.abs(self.lattice)[self._sup >= margin])) / self._absmass


def form_value(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
               u: Field, grid: Grid,
               convolver: Optional[LatticeConvolver] = None) -> float:
    """f[u] = (A u, u) + (V u, u) with h^d midpoint weights.

    For box-supported test functions the zero-padded convolution represents
    every kernel offset the form needs, so the only approximation is
    quadrature; WrapAroundRisk is raised when an under-padded convolver would
    let more than 1e-6 of the kernel's |a| mass alias into the box.
    """
    conv = convolver if convolver is not None else LatticeConvolver(kernel_spec, grid)
    if conv.aliasing_fraction() > 1e-6:
        raise WrapAroundRisk(
            f"kernel mass fraction {conv.aliasing_fraction():.2e} aliases under "
            f"padding {conv.P} (box {grid.points} points)"
        )
    h_d = grid.cell_volume
    au = conv.apply(u.values)
    vvals = sample_potential(potential_spec, grid).values
    val = h_d * (np.vdot(u.values, au) + np.vdot(u.values, vvals * u.values))
    if abs(val.imag) > 1e-9 * max(abs(val), 1e-300):
        raise ArithmeticError(f"form value has imaginary residue {val.imag:.3e}")
    return float(val.real)


def form_value_transform(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                         u: Field, grid: Grid) -> float:
    """Same form through the transform route (Plancherel on the padded lattice).

    Independent evaluation path: the convolution term becomes
    (2pi)^-d (dxi)^d sum ahat |uhat|^2 over the padded frequency grid.
    """
    n = grid.points
    d = grid.dim
    h = grid.spacing
    P = 2 * n
    offs = np.fft.fftfreq(P, d=1.0 / P).astype(int) * h
    mesh = np.meshgrid(*([offs] * d), indexing="ij")
    aker = np.asarray(kernel_spec.evaluate(*mesh))
    ahat = np.fft.fftn(aker) * h ** d
    fu = np.fft.fftn(u.values, s=(P,) * d, axes=tuple(range(d))) * h ** d
    dxi = 2.0 * np.pi / (P * h)
    conv_term = (2.0 * np.pi) ** (-d) * dxi ** d * np.sum(ahat * np.abs(fu) ** 2)
    vvals = sample_potential(potential_spec, grid).values
    pot_term = grid.cell_volume * np.vdot(u.values, vvals * u.values)
    val = conv_term + pot_term
    return float(np.real(val))


# ---------------------------------------------------------------------------
# test bases


@dataclass
class TestBasis:
    """Finite family of grid-sampled test functions with a declared support cube."""

    kind: str
    members: list            # list of ndarrays on the grid
    grid: Grid
    center: np.ndarray
    side: float
    labels: list = field(default_factory=list)

    def __len__(self):
        return len(self.members)


def indicator_basis(grid: Grid, x0, delta: float) -> TestBasis:
    """Single normalized indicator delta^{-d/2} 1_{Q_delta(x0)}."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    mesh = grid.meshgrid()
    sup = np.abs(mesh[0] - x0[0])
    for i in range(1, grid.dim):
        sup = np.maximum(sup, np.abs(mesh[i] - x0[i]))
    member = np.where(sup < delta / 2, delta ** (-grid.dim / 2), 0.0)
    return TestBasis("indicator", [member], grid, x0, delta, labels=[f"delta={delta:g}"])


def fourier_mode_basis(grid: Grid, x0, r: float, indices: Sequence) -> TestBasis:
    """Modes r^{-d} exp(2 pi i n.(x-x0)/r) cut to Q_r(x0), one per index."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    mesh = grid.meshgrid()
    sup = np.abs(mesh[0] - x0[0])
    for i in range(1, grid.dim):
        sup = np.maximum(sup, np.abs(mesh[i] - x0[i]))
    inside = sup < r / 2
    members, labels = [], []
    for n in indices:
        nv = np.atleast_1d(np.asarray(n, dtype=float))
        phase = sum(nv[i] * (mesh[i] - x0[i]) for i in range(grid.dim))
        mode = np.exp(2j * np.pi * phase / r) / r ** grid.dim
        members.append(np.where(inside, mode, 0.0))
        labels.append(str(tuple(int(c) for c in nv)))
    return TestBasis("fourier_modes", members, grid, x0, r, labels=labels)


def polynomial_basis(grid: Grid, x0, delta: float, degree: int) -> TestBasis:
    """Polynomials in (x-x0)/delta up to total degree, cut to Q_delta(x0).

    Members are orthonormalized (modified Gram-Schmidt in the discrete L2
    inner product); raw monomial Gram matrices are Hilbert-like and
    catastrophically ill-conditioned beyond degree ~8.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    mesh = grid.meshgrid()
    sup = np.abs(mesh[0] - x0[0])
    for i in range(1, grid.dim):
        sup = np.maximum(sup, np.abs(mesh[i] - x0[i]))
    inside = sup < delta / 2
    h_d = grid.cell_volume
    members, labels = [], []
    for total in range(degree + 1):
        for n in itertools.product(range(total + 1), repeat=grid.dim):
            if sum(n) != total:
                continue
            mono = np.ones_like(mesh[0])
            for i in range(grid.dim):
                mono = mono * ((mesh[i] - x0[i]) / delta) ** n[i]
            mono = np.where(inside, mono, 0.0)
            for prev in members:
                mono = mono - prev * (h_d * np.vdot(prev, mono))
            norm = np.sqrt(h_d * np.vdot(mono, mono).real)
            if norm > 0:
                members.append(mono / norm)
                labels.append(str(n))
    return TestBasis("polynomial", members, grid, x0, delta, labels=labels)


def grid_bump_basis(grid: Grid, x0, side: float, count: int) -> TestBasis:
    """Disjoint normalized block indicators tiling the cube Q_side(x0) (1d)."""
    if grid.dim != 1:
        raise ValueError("grid bumps implemented for one dimension")
    x0 = float(np.atleast_1d(x0)[0])
    edges = np.linspace(x0 - side / 2, x0 + side / 2, count + 1)
    ax = grid.axis()
    members, labels = [], []
    for i in range(count):
        sel = (ax >= edges[i]) & (ax < edges[i + 1])
        width = edges[i + 1] - edges[i]
        members.append(np.where(sel, width ** -0.5, 0.0))
        labels.append(f"[{edges[i]:.3g},{edges[i+1]:.3g})")
    return TestBasis("grid_bumps", members, grid, np.array([x0]), side, labels=labels)


# ---------------------------------------------------------------------------
# Rayleigh-Ritz


@dataclass
class RitzResult:
    """Generalized Ritz data: form matrix A, Gram B, sorted values, counts."""

    A: np.ndarray
    B: np.ndarray
    theta: np.ndarray
    mu0: float
    tol: float
    certified_count: int
    gram_cond: float
    basis_kind: str = ""


def assemble(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
             basis: TestBasis, grid: Grid,
             mu0: Optional[float] = None, tol: Optional[float] = None,
             convolver: Optional[LatticeConvolver] = None) -> RitzResult:
    """Assemble A_ij = (L phi_j, phi_i), B_ij = (phi_j, phi_i), solve A x = theta B x.

    Every Ritz value theta_k < mu0 - tol certifies one discrete eigenvalue
    below mu0 by the minimax principle (up to quadrature error).  The matrices
    are Hermitized after a 1e-10 relative symmetry check; a Gram condition
    number beyond 1e12 rejects the basis as numerically dependent.
    """
    if mu0 is None:
        mu0 = spectral_bounds(kernel_spec, potential_spec, grid).mu0
    if tol is None:
        tol = default_tol(mu0)
    conv = convolver if convolver is not None else LatticeConvolver(kernel_spec, grid)
    vvals = sample_potential(potential_spec, grid).values
    h_d = grid.cell_volume

    members = basis.members
    m = len(members)
    complex_basis = any(np.iscomplexobj(u) for u in members)
    dtype = complex if complex_basis else float
    A = np.zeros((m, m), dtype=dtype)
    B = np.zeros((m, m), dtype=dtype)
    images = [conv.apply(u) + vvals * u for u in members]
    for i in range(m):
        for j in range(m):
            A[i, j] = h_d * np.vdot(members[i], images[j])
            B[i, j] = h_d * np.vdot(members[i], members[j])

    a_scale = np.max(np.abs(A)) or 1.0
    if np.max(np.abs(A - A.conj().T)) > HERMITICITY_RTOL * a_scale:
        raise ArithmeticError("assembled form matrix is not Hermitian within tolerance")
    A = 0.5 * (A + A.conj().T)
    B = 0.5 * (B + B.conj().T)

    gram_cond = float(np.linalg.cond(B))
    if not np.isfinite(gram_cond) or gram_cond > GRAM_COND_LIMIT:
        raise GramSingular(f"Gram condition number {gram_cond:.3e} exceeds {GRAM_COND_LIMIT:.0e}")
    theta = scipy.linalg.eigh(A, B, eigvals_only=True)
    certified = int(np.sum(theta < mu0 - tol))
    return RitzResult(A=A, B=B, theta=theta, mu0=mu0, tol=tol,
                      certified_count=certified, gram_cond=gram_cond,
                      basis_kind=basis.kind)


def dense_oracle(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                 grid: Grid, cap: int = DENSE_CAP) -> np.ndarray:
    """Sorted eigenvalues of M_jk = h^d a(x_j - x_k) + V(x_j) delta_jk.

    Resolution capped at `cap` total points (O(n^3) eigensolve).
    """
    total = grid.points ** grid.dim
    if total > cap:
        raise CapExceeded(f"{total} grid points exceed the dense-oracle cap {cap}")
    ax = grid.axis()
    if grid.dim == 1:
        pts = ax[:, None]
    else:
        mesh = grid.meshgrid()
        pts = np.stack([m.reshape(-1) for m in mesh], axis=1)
    diffs = [pts[:, i][:, None] - pts[:, i][None, :] for i in range(grid.dim)]
    M = grid.cell_volume * np.asarray(kernel_spec.evaluate(*diffs))
    vvals = sample_potential(potential_spec, grid).values.reshape(-1)
    M = M + np.diag(vvals)
    if np.iscomplexobj(M):
        herm_defect = np.max(np.abs(M - M.conj().T))
        if herm_defect > HERMITICITY_RTOL * (np.max(np.abs(M)) or 1.0):
            raise ArithmeticError("dense discretization is not Hermitian")
        M = 0.5 * (M + M.conj().T)
        return np.sort(np.linalg.eigvalsh(M))
    M = 0.5 * (M + M.T)
    return np.sort(np.linalg.eigvalsh(M))


def count_below(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                bases: Sequence[TestBasis], grid: Grid,
                mu0: float, tol: Optional[float] = None) -> list[int]:
    """Certified counts for a growing family of bases (nested => nondecreasing)."""
    conv = LatticeConvolver(kernel_spec, grid)
    return [
        assemble(kernel_spec, potential_spec, b, grid, mu0=mu0, tol=tol,
                 convolver=conv).certified_count
        for b in bases
    ]

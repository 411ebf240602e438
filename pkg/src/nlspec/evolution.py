"""Density evolution du/dt = (A + V) u - <a> u and growth-rate extraction.

In the population-dynamics reading, a is the dispersal kernel, V the local
birth/death imbalance, and <a> = integral a(z) dz the total dispersal mass;
a positive top eigenvalue of the generator means exponential growth of the
density, at the rate (top eigenvalue of A + V) - <a>.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateTrajectory, StabilityGuard, TailDivergence
from .galerkin import LatticeConvolver
from .model import Field, Grid, KernelSpec, PotentialSpec, l1_norm, sample_kernel, sample_potential


@dataclass
class EvolutionState:
    """Density snapshot: nonnegative field, time, and total mass h^d sum u."""

    u: Field
    t: float

    @property
    def mass(self) -> float:
        return float(self.u.grid.cell_volume * np.sum(self.u.values))

    @property
    def l2_norm(self) -> float:
        return float(np.sqrt(self.u.grid.cell_volume * np.sum(np.abs(self.u.values) ** 2)))


class EvolutionDriver:
    """Explicit time stepping for one kernel/potential pair on one grid.

    Precomputes the lattice convolution and <a>; `step` advances one dt with
    forward Euler or classical RK4.  The stability guard requires
    dt * (||a||_L1 + ||V||_inf + <a>) < 1 before any step.
    """

    def __init__(self, kernel_spec: KernelSpec, potential_spec: PotentialSpec, grid: Grid):
        self.grid = grid
        self.conv = LatticeConvolver(kernel_spec, grid)
        self.vvals = sample_potential(potential_spec, grid).values
        kern = sample_kernel(kernel_spec, grid)
        self.mean_a = float(grid.cell_volume * np.sum(np.real(kern.values)))
        self._l1 = l1_norm(kern, grid)
        self._vsup = float(np.max(np.abs(self.vvals)))

    @property
    def stability_scale(self) -> float:
        return self._l1 + self._vsup + self.mean_a

    def max_dt(self) -> float:
        s = self.stability_scale
        return np.inf if s <= 0 else 1.0 / s

    def rhs(self, u: np.ndarray) -> np.ndarray:
        return self.conv.apply(u) + self.vvals * u - self.mean_a * u

    def step(self, state: EvolutionState, dt: float, scheme: str = "rk4") -> EvolutionState:
        if dt * self.stability_scale >= 1.0:
            raise StabilityGuard(
                f"dt={dt:g} too large: dt * (||a||_1 + ||V||_inf + <a>) = "
                f"{dt * self.stability_scale:.3g} >= 1; try dt < {self.max_dt():.3g}",
                suggested_dt=0.5 * self.max_dt(),
            )
        u = state.u.values
        if scheme == "euler":
            new = u + dt * self.rhs(u)
        elif scheme == "rk4":
            k1 = self.rhs(u)
            k2 = self.rhs(u + 0.5 * dt * k1)
            k3 = self.rhs(u + 0.5 * dt * k2)
            k4 = self.rhs(u + dt * k3)
            new = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        else:
            raise ValueError(f"unknown scheme {scheme!r} (euler or rk4)")
        return EvolutionState(Field(new, self.grid, role="state"), state.t + dt)

    def run(self, state: EvolutionState, dt: float, n_steps: int,
            scheme: str = "rk4") -> tuple[EvolutionState, list[dict]]:
        """Advance n_steps, recording (t, mass, l2norm) after every step."""
        records = []
        for _ in range(n_steps):
            state = self.step(state, dt, scheme=scheme)
            records.append({"t": state.t, "mass": state.mass, "l2norm": state.l2_norm})
        return state, records


def step(state: EvolutionState, kernel_spec: KernelSpec, potential_spec: PotentialSpec,
         dt: float, scheme: str = "rk4") -> EvolutionState:
    """One explicit step; convenience wrapper building a fresh driver."""
    driver = EvolutionDriver(kernel_spec, potential_spec, state.u.grid)
    return driver.step(state, dt, scheme=scheme)


def initial_bump(grid: Grid, x0=None, width: float = 1.0) -> EvolutionState:
    """Normalized positive Gaussian bump; couples to the principal mode."""
    x0 = np.zeros(grid.dim) if x0 is None else np.atleast_1d(np.asarray(x0, dtype=float))
    mesh = grid.meshgrid()
    r2 = sum((m - c) ** 2 for m, c in zip(mesh, x0))
    u = np.exp(-r2 / width ** 2)
    u /= np.sqrt(grid.cell_volume * np.sum(u ** 2))
    return EvolutionState(Field(u, grid, role="state"), 0.0)


def growth_rate(times: Sequence[float], norms: Sequence[float]) -> float:
    """Least-squares slope of log-norm over the trailing half of the samples.

    The leading half is discarded as transient (mixing of non-principal
    modes).  Raises DegenerateTrajectory on fewer than three samples or
    non-positive norms.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(norms, dtype=float)
    if t.size < 3:
        raise DegenerateTrajectory("need at least three samples")
    if np.any(v <= 0) or not np.all(np.isfinite(v)):
        raise DegenerateTrajectory("norms must be positive and finite")
    half = t.size // 2
    A = np.vstack([t[half:], np.ones(t.size - half)]).T
    slope, _ = np.linalg.lstsq(A, np.log(v[half:]), rcond=None)[0]
    return float(slope)


def diffusion_tensor(kernel_spec: KernelSpec, grid: Grid,
                     shell_fraction_limit: float = 0.01) -> np.ndarray:
    """Second-moment matrix D_ij = integral z_i z_j a(z) dz by midpoint sums.

    Raises TailDivergence when the outer dyadic shell (|z|_inf > L/4) carries
    more than `shell_fraction_limit` of the total |z_i z_j a| mass, which is
    the sampled signature of a divergent second moment.
    """
    mesh = grid.meshgrid()
    vals = np.real(np.asarray(kernel_spec.evaluate(*mesh)))
    sup = np.abs(mesh[0])
    for m in mesh[1:]:
        sup = np.maximum(sup, np.abs(m))
    outer = sup > grid.length / 4
    d = grid.dim
    D = np.zeros((d, d))
    for i in range(d):
        for j in range(d):
            integrand = mesh[i] * mesh[j] * vals
            total_abs = float(np.sum(np.abs(integrand)))
            shell_abs = float(np.sum(np.abs(integrand[outer])))
            if total_abs > 0 and shell_abs > shell_fraction_limit * total_abs:
                raise TailDivergence(
                    f"outer shell carries {shell_abs / total_abs:.1%} of the "
                    f"|z_{i} z_{j} a| mass; second moment does not converge"
                )
            D[i, j] = grid.cell_volume * float(np.sum(integrand))
    return 0.5 * (D + D.T)

"""Cube quadrature and improper integrals with divergence detection.

The improper-integral engine integrates a nonnegative integrand whose
denominator vanishes at isolated points (or on whole intervals, in which
case the integral diverges).  Near each candidate singularity the mesh is
graded by dyadic shells; the whole evaluation is repeated at increasing
shell depth and the run is declared divergent when successive refinements
keep growing by more than 10% twice in a row, or when any sample exceeds
the integrand cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

INTEGRAND_CAP = 1e12
GROWTH_LIMIT = 0.10


def cube_midpoint(fun: Callable, center, side: float, dim: int, cells: int = 256) -> float:
    """Tensor midpoint rule for integral of fun over the cube of given side."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    step = side / cells
    y = -side / 2 + (np.arange(cells) + 0.5) * step
    mesh = np.meshgrid(*[(y + c) for c in center[:dim]], indexing="ij")
    vals = np.asarray(fun(*mesh), dtype=float)
    return float(np.sum(vals) * step ** dim)


@dataclass
class ImproperResult:
    value: float
    converged: bool
    divergent: bool
    refinements: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.divergent:
            return "divergent"
        return "converged" if self.converged else "unresolved"


def _shell_sum(fun: Callable, a: float, b: float, toward_b: bool,
               depth: int, per_shell: int) -> tuple[float, bool]:
    """Dyadic shells of [a, b] graded toward one endpoint; midpoint per shell."""
    total = 0.0
    width = b - a
    if width <= 0:
        return 0.0, False
    capped = False
    for k in range(depth):
        if toward_b:
            x0 = b - width * 2.0 ** (-k)
            x1 = b - width * 2.0 ** (-k - 1)
        else:
            x0 = a + width * 2.0 ** (-k - 1)
            x1 = a + width * 2.0 ** (-k)
        t = x0 + (np.arange(per_shell) + 0.5) * (x1 - x0) / per_shell
        vals = np.asarray(fun(t), dtype=float)
        if np.any(vals > INTEGRAND_CAP) or not np.all(np.isfinite(vals)):
            capped = True
            vals = np.minimum(vals, INTEGRAND_CAP)
        total += float(np.sum(vals)) * (x1 - x0) / per_shell
    return total, capped


def improper_integral_1d(fun: Callable, lo: float, hi: float,
                         singular_points: Sequence[float],
                         depth_schedule: Sequence[int] = (16, 24, 32, 40, 48),
                         per_shell: int = 64,
                         rtol: float = 1e-4) -> ImproperResult:
    """Integrate fun >= 0 over [lo, hi] with graded meshes near singular points.

    Divergence is declared when two consecutive refinements each grow the
    total by more than 10%, or when the integrand cap is hit on the deepest
    pass.  Convergence requires successive totals agreeing within rtol.
    """
    sings = sorted(s for s in singular_points if lo < s < hi)
    # segment boundaries: singular points split the domain
    bounds = [lo] + sings + [hi]
    totals = []
    capped_last = False
    grow_streak = 0
    for depth in depth_schedule:
        total = 0.0
        capped = False
        for i in range(len(bounds) - 1):
            a, b = bounds[i], bounds[i + 1]
            left_sing = a in sings
            right_sing = b in sings
            if left_sing and right_sing:
                mid = 0.5 * (a + b)
                s1, c1 = _shell_sum(fun, a, mid, toward_b=False, depth=depth, per_shell=per_shell)
                s2, c2 = _shell_sum(fun, mid, b, toward_b=True, depth=depth, per_shell=per_shell)
                total += s1 + s2
                capped |= c1 or c2
            elif left_sing:
                s, c = _shell_sum(fun, a, b, toward_b=False, depth=depth, per_shell=per_shell)
                total += s
                capped |= c
            elif right_sing:
                s, c = _shell_sum(fun, a, b, toward_b=True, depth=depth, per_shell=per_shell)
                total += s
                capped |= c
            else:
                # regular segment: resolution must grow with the schedule, or
                # the refinement comparison would be vacuous
                m_reg = per_shell * max(8, depth)
                t = a + (np.arange(m_reg) + 0.5) * (b - a) / m_reg
                vals = np.asarray(fun(t), dtype=float)
                if np.any(vals > INTEGRAND_CAP) or not np.all(np.isfinite(vals)):
                    capped = True
                    vals = np.minimum(vals, INTEGRAND_CAP)
                total += float(np.sum(vals)) * (b - a) / m_reg
        totals.append(total)
        capped_last = capped
        if len(totals) >= 2:
            prev = totals[-2]
            growth = (total - prev) / max(abs(prev), 1e-300)
            grow_streak = grow_streak + 1 if growth > GROWTH_LIMIT else 0
            if grow_streak >= 2:
                return ImproperResult(total, converged=False, divergent=True, refinements=totals)
            if abs(total - prev) <= rtol * max(abs(total), 1e-300) and not capped:
                return ImproperResult(total, converged=True, divergent=False, refinements=totals)
    return ImproperResult(totals[-1], converged=False, divergent=capped_last,
                          refinements=totals)

"""Every discrete-spectrum criterion on one fixture battery.

For each kernel/potential pair the checkers evaluate their hypotheses and
report a verdict with a guaranteed eigenvalue-count bound.  The battery below
shows the typical outcomes: existence from the scaled-indicator test,
finite counts from local Fourier coefficients and kernel derivatives,
infinite families from flat bottoms, and the trace-route upper bound.
"""

import numpy as np

from nlspec import (
    Grid,
    HypothesisFailed,
    KernelSpec,
    PotentialSpec,
    birman_schwinger_bound,
    check_analytic_infinite,
    check_dominance,
    check_existence,
    check_flat_infinite,
    check_fourier_count,
    check_smooth_count,
    derivatives_at_zero,
    spectral_bounds,
)

grid = Grid(1, 40.0, 2048)
scan = [0.25, 0.5, 1.0, 2.0]

fixtures = [
    ("cauchy kernel + plateau well",
     KernelSpec("cauchy_product"), PotentialSpec("plateau_well", (5.0, 1.0, 2.0))),
    ("negative gaussian kernel + wide plateau",
     KernelSpec("neg_gaussian"), PotentialSpec("plateau_well", (5.0, 2.0, 3.0))),
    ("negative gaussian kernel + sqrt well",
     KernelSpec("neg_gaussian"), PotentialSpec("sqrt_well", (2.0,))),
    ("gaussian kernel + gaussian well (no spectrum below mu0)",
     KernelSpec("gaussian"), PotentialSpec("gaussian_well", (4.0,))),
]

for label, kernel, potential in fixtures:
    print("=" * 72)
    print(label)
    summary = spectral_bounds(kernel, potential, grid)
    print(f"  mu0 = {summary.mu0:.6f}, mu1 = {summary.mu1:.6f}")
    r = 4.0 if potential.params[:2] == (5.0, 2.0) else 2.0

    try:
        rep = check_existence(kernel, potential, grid, summary, scan)
        print(f"  existence:            {rep.verdict:13s} bound={rep.bound}")
    except HypothesisFailed as exc:
        print(f"  existence:            hypothesis failed ({exc})")

    rep = check_fourier_count(kernel, potential, grid, summary, r=r, n_max=8)
    print(f"  fourier_count:        {rep.verdict:13s} bound={rep.bound}")

    try:
        derivs = derivatives_at_zero(kernel, 6)
        rep = check_smooth_count(derivs, potential, (0.0,), 1, scan, summary)
        print(f"  smooth_count:         {rep.verdict:13s} bound={rep.bound}")
        rep = check_dominance(derivs, [(0,), (1,)], summary, 1,
                              potential_spec=potential)
        print(f"  derivative_dominance: {rep.verdict:13s} bound={rep.bound}")
        rep = check_analytic_infinite(derivs, 1.0, 1.0, 1.0, 12, summary=summary,
                                      potential_spec=potential)
        print(f"  analytic_infinite:    {rep.verdict:13s} bound={rep.bound}")
    except Exception as exc:
        print(f"  derivative checkers:  skipped ({type(exc).__name__})")

    rep = check_flat_infinite(kernel, potential, grid, summary, r=r, n_max=8)
    print(f"  flat_infinite:        {rep.verdict:13s} bound={rep.bound}")

    try:
        rep = birman_schwinger_bound(kernel, potential, grid, summary)
        extra = (f"upper bound {rep.upper_bound:g}" if rep.verdict == "SATISFIED"
                 else "no finite upper bound")
        print(f"  birman_schwinger:     {rep.verdict:13s} {extra}")
    except HypothesisFailed as exc:
        print(f"  birman_schwinger:     hypothesis failed ({exc})")

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -v -s tests/test_acceptance.py` to see the per-criterion
lines as they complete.  Expected values tagged as derived were computed with
the independent adaptive-quadrature oracles in oracles.py; closed-form values
(pi, sqrt(pi), factorials) are asserted directly.
"""

import math
import time

import numpy as np
import pytest

from nlspec import (
    Grid,
    HypothesisFailed,
    KernelSpec,
    NotSmooth,
    PotentialSpec,
    assemble,
    birman_schwinger_bound,
    check_analytic_infinite,
    check_dominance,
    check_existence,
    check_flat_infinite,
    check_fourier_count,
    check_smooth_count,
    count_below,
    cross_validate,
    default_tol,
    dense_oracle,
    derivatives_at_zero,
    form_value,
    form_value_transform,
    fourier_mode_basis,
    indicator_basis,
    polynomial_basis,
    spectral_bounds,
    EvolutionDriver,
    Field,
    growth_rate,
    initial_bump,
)
from nlspec.criteria import INCONCLUSIVE, SATISFIED, VIOLATED

from conftest import zero_potential

_RESULTS = []


def report(num, ok, detail):
    line = f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    _RESULTS.append(line)
    assert ok, line


def hausdorff_to_segment(points, lo, hi, mesh=4001):
    """sup over the segment of the distance to the point set."""
    if len(points) == 0:
        return hi - lo
    probe = np.linspace(lo, hi, mesh)
    return float(np.max(np.min(np.abs(points[None, :] - probe[:, None]), axis=1)))


CAUCHY = KernelSpec("cauchy_product")
NEG_GAUSS = KernelSpec("neg_gaussian")
PLATEAU = PotentialSpec("plateau_well", (5.0, 1.0, 2.0))
SUPERFLAT = PotentialSpec("superflat_well", (5.0,))
SQRT4 = PotentialSpec("sqrt_well", (2.0,))


def test_criterion_1_essential_spectrum_fixture():
    t0 = time.monotonic()
    g = Grid(1, 200.0, 2 ** 14)
    s = spectral_bounds(CAUCHY, PLATEAU, g)
    ok = s.mu0 == -5.0 and s.mu1 == 0.0 and abs(s.a_min + math.pi) < 1e-3

    og = Grid(1, 60.0, 1024)
    eigs1 = dense_oracle(CAUCHY, PLATEAU, og)
    inside1 = eigs1[(eigs1 >= s.mu0 - 1e-9) & (eigs1 <= s.mu1 + 1e-9)]
    d1 = hausdorff_to_segment(inside1, -5.0, 0.0)
    og2 = Grid(1, 60.0, 2048)
    eigs2 = dense_oracle(CAUCHY, PLATEAU, og2)
    inside2 = eigs2[(eigs2 >= s.mu0 - 1e-9) & (eigs2 <= s.mu1 + 1e-9)]
    d2 = hausdorff_to_segment(inside2, -5.0, 0.0)
    elapsed = time.monotonic() - t0
    ok = ok and d2 < 0.15 and d2 < d1 and elapsed < 60.0
    report(1, ok,
           f"mu0={s.mu0:g}, mu1={s.mu1:g}, a_min err={abs(s.a_min + math.pi):.2e}, "
           f"Hausdorff {d1:.3f} -> {d2:.3f}, {elapsed:.1f}s")


def test_criterion_2_superflat_example():
    t0 = time.monotonic()
    g = Grid(1, 40.0, 2048)
    s = spectral_bounds(CAUCHY, SUPERFLAT, g, force=True)
    eigs = dense_oracle(CAUCHY, SUPERFLAT, g)
    below = eigs[eigs < -5.0]
    interval_ok = bool(np.all(below >= -5.0 - math.pi - 1e-6))
    elapsed = time.monotonic() - t0
    ok = (s.v_min == -5.0 and len(below) >= 3 and interval_ok and elapsed < 60.0)
    report(2, ok,
           f"{len(below)} eigenvalues below -5, all in [-5-pi, -5): {interval_ok}, "
           f"min={below.min():.6f}, {elapsed:.1f}s")


def _sweep_battery():
    kernels = [
        KernelSpec("cauchy_product"),
        KernelSpec("gaussian"),
        KernelSpec("exponential"),
        KernelSpec("neg_gaussian"),
    ]
    potentials = [
        PotentialSpec("gaussian_well", (4.0,)),
        PotentialSpec("plateau_well", (5.0, 1.0, 2.0)),
        PotentialSpec("power_well", (4.0, 1.5)),
        PotentialSpec("sqrt_well", (4.0,)),
    ]
    return kernels, potentials


def test_criterion_3_soundness_sweep():
    t0 = time.monotonic()
    kernels, potentials = _sweep_battery()
    grids = [Grid(1, 24.0, 768), Grid(1, 32.0, 1024)]
    scan = [0.25, 0.5, 1.0, 2.0]
    pairs = 0
    claims = 0
    violations = []
    for kern in kernels:
        for pot in potentials:
            pairs += 1
            for g in grids:
                s = spectral_bounds(kern, pot, g)
                reports = []
                try:
                    reports.append(check_existence(kern, pot, g, s, scan,
                                                   margin=0.05))
                except HypothesisFailed:
                    pass
                reports.append(check_fourier_count(kern, pot, g, s, r=2.0,
                                                   n_max=8, margin=1e-3))
                try:
                    derivs = derivatives_at_zero(kern, 1)
                    reports.append(check_smooth_count(
                        derivs, pot, (0.0,), 1, scan, s))
                    reports.append(check_dominance(
                        derivs, [(0,)], s, 1, potential_spec=pot, x0=(0.0,)))
                except NotSmooth:
                    pass
                rows = cross_validate(kern, pot, g, reports, s.mu0,
                                      delta_scan=scan)
                for row in rows:
                    claims += 1
                    if not row["sound"]:
                        violations.append(
                            (kern.family, pot.family, g.points, row))
    elapsed = time.monotonic() - t0
    ok = pairs >= 12 and claims >= 10 and not violations
    report(3, ok,
           f"{pairs} kernel/potential pairs x 2 resolutions, {claims} SATISFIED "
           f"claims validated, {len(violations)} violations, {elapsed:.1f}s"
           + (f"; first violation: {violations[0]}" if violations else ""))


def test_criterion_4_infinite_spectrum_growth():
    t0 = time.monotonic()
    g = Grid(1, 20.0, 2048)
    s = spectral_bounds(CAUCHY, PLATEAU, g)
    sizes = (1, 3, 5, 9)
    bases = []
    for size in sizes:
        k = (size - 1) // 2
        bases.append(fourier_mode_basis(g, (0.0,), 2.0, [(n,) for n in range(-k, k + 1)]))
    counts = count_below(CAUCHY, PLATEAU, bases, g, mu0=s.mu0)
    strictly_increasing = all(b > a for a, b in zip(counts, counts[1:]))
    at_least = all(c >= k for c, k in zip(counts, (1, 2, 3, 4)))

    oracle_counts = []
    tol = default_tol(-5.0)
    for n in (256, 512, 1024):
        eigs = dense_oracle(CAUCHY, PLATEAU, Grid(1, 40.0, n))
        oracle_counts.append(int(np.sum(eigs < -5.0 - tol)))
    growing = all(b > a for a, b in zip(oracle_counts, oracle_counts[1:]))
    elapsed = time.monotonic() - t0
    ok = strictly_increasing and at_least and growing and elapsed < 120.0
    report(4, ok,
           f"certified counts {counts} for sizes {list(sizes)}, oracle counts "
           f"{oracle_counts} for n in (256,512,1024), {elapsed:.1f}s")


def test_criterion_5_birman_schwinger():
    t0 = time.monotonic()
    g = Grid(1, 40.0, 2048)
    s = spectral_bounds(NEG_GAUSS, SQRT4, g)
    rep = birman_schwinger_bound(NEG_GAUSS, SQRT4, g, s)
    iv = rep.witnesses["I_V"]
    ia = rep.witnesses["I_a"]
    iv_ok = abs(iv["value"] - 2.0) < 1e-3
    refs = ia["refinements"]
    ia_ok = (len(refs) >= 2
             and abs(refs[-1] - refs[-2]) < 1e-4 * max(abs(refs[-1]), 1e-300))
    counts_ok = True
    for pts, length in ((512, 20.0), (1024, 20.0), (2048, 40.0)):
        eigs = dense_oracle(NEG_GAUSS, SQRT4, Grid(1, length, pts))
        count = int(np.sum(eigs < s.mu0 - default_tol(s.mu0)))
        counts_ok = counts_ok and count <= rep.upper_bound

    s2 = spectral_bounds(CAUCHY, PLATEAU, g)
    rep2 = birman_schwinger_bound(CAUCHY, PLATEAU, g, s2)
    divergence_ok = (rep2.verdict == INCONCLUSIVE
                     and rep2.witnesses["I_V"]["status"] == "divergent")
    elapsed = time.monotonic() - t0
    ok = (rep.verdict == SATISFIED and iv_ok and ia_ok and counts_ok
          and divergence_ok)
    report(5, ok,
           f"I_V={iv['value']:.6f} (analytic 2), I_a={ia['value']:.6f}, "
           f"bound={rep.upper_bound:g}, oracle counts respect it: {counts_ok}, "
           f"plateau divergent: {divergence_ok}, {elapsed:.1f}s")


def test_criterion_6_smooth_count_fixture():
    t0 = time.monotonic()
    g = Grid(1, 20.0, 2048)
    s = spectral_bounds(CAUCHY, PLATEAU, g)
    derivs = derivatives_at_zero(CAUCHY, 1)
    scan = [0.25, 0.5, 1.0, 2.0]
    rep = check_smooth_count(derivs, PLATEAU, (0.0,), 1, scan, s)
    matrix_ok = rep.witnesses["form_matrix"] == [[-1.0, 0.0], [0.0, -2.0]]
    inertia_ok = rep.verdict == SATISFIED and rep.bound == 2

    dom = check_dominance(derivs, [(0,), (1,)], s, 1, potential_spec=PLATEAU)
    dominance_ok = (dom.verdict == SATISFIED and dom.bound == 2
                    and dom.witnesses["beta1"] == 0.0)

    best = 0
    for delta in scan:
        basis = polynomial_basis(g, (0.0,), delta, 1)
        res = assemble(CAUCHY, PLATEAU, basis, g, mu0=s.mu0)
        best = max(best, res.certified_count)
    elapsed = time.monotonic() - t0
    ok = matrix_ok and inertia_ok and dominance_ok and best >= 2
    report(6, ok,
           f"form matrix diag(-1,-2): {matrix_ok}, inertia bound 2: {inertia_ok}, "
           f"dominance beta1=0: {dominance_ok}, certified={best}, {elapsed:.1f}s")


def test_criterion_7_analytic_infinite():
    t0 = time.monotonic()
    derivs = derivatives_at_zero(CAUCHY, 6)
    # the factorial pattern: (-1)^n d^{2n} a(0) = -(2n)!
    pattern_ok = all(
        (-1) ** n * derivs.deriv((2 * n,)) == -math.factorial(2 * n)
        for n in range(7))
    g = Grid(1, 40.0, 2048)
    s = spectral_bounds(CAUCHY, PLATEAU, g)
    rep = check_analytic_infinite(derivs, 1.0, 1.0, 1.0, 12, summary=s,
                                  potential_spec=PLATEAU)
    passes = rep.verdict == SATISFIED and rep.bound == "infinite"

    neg_derivs = derivatives_at_zero(NEG_GAUSS, 6)
    rep2 = check_analytic_infinite(neg_derivs, 1.0, 1.0, 1.0, 12)
    # (2n)!/n! >= (2n)! holds with equality at n = 1 and first fails at n = 2
    fails = rep2.verdict == VIOLATED and rep2.witnesses["growth_witness"] == [2]
    elapsed = time.monotonic() - t0
    ok = pattern_ok and passes and fails
    report(7, ok,
           f"factorial pattern passes up to cutoff 12: {passes}, neg-gaussian "
           f"violated with witness n=2: {fails}, {elapsed:.1f}s")


def test_criterion_8_invariant_suites():
    t0 = time.monotonic()
    checks = {}

    # hermiticity and range bound on an assembled mode family
    g = Grid(1, 20.0, 1024)
    s = spectral_bounds(CAUCHY, PLATEAU, g)
    basis = fourier_mode_basis(g, (0.0,), 2.0, [(n,) for n in range(-3, 4)])
    res = assemble(CAUCHY, PLATEAU, basis, g, mu0=s.mu0)
    checks["hermiticity"] = bool(
        np.max(np.abs(res.A - res.A.conj().T)) <= 1e-10 * np.max(np.abs(res.A)))
    eps = 1e-6 * (s.range_hi - s.range_lo + 1.0)
    eigs = dense_oracle(CAUCHY, PLATEAU, g)
    checks["range_bound"] = bool(
        np.all(res.theta >= s.range_lo - eps) and np.all(res.theta <= s.range_hi + eps)
        and eigs[0] >= s.range_lo - eps and eigs[-1] <= s.range_hi + eps)

    # interlacing under basis growth
    prev = None
    inter_ok = True
    for k in range(4):
        b = fourier_mode_basis(g, (0.0,), 2.0, [(n,) for n in range(-k, k + 1)])
        th = assemble(CAUCHY, PLATEAU, b, g, mu0=s.mu0).theta
        if prev is not None:
            inter_ok = inter_ok and all(
                th[i] <= prev[i] + 1e-10 for i in range(len(prev)))
        prev = th
    checks["interlacing"] = inter_ok

    # Parseval and index-doubling identities on an aligned cube
    ga = Grid(1, 16.0, 1024)
    r = 2.0
    coeffs = {(-1,): 0.3 - 0.1j, (0,): 1.0, (2,): -0.25j}
    bb = fourier_mode_basis(ga, (0.0,), r, list(coeffs))
    u = sum(c * m for c, m in zip(coeffs.values(), bb.members))
    lhs = ga.cell_volume * np.sum(np.abs(u) ** 2)
    rhs = sum(abs(c) ** 2 for c in coeffs.values()) / r
    checks["parseval"] = abs(lhs - rhs) <= 1e-8 * rhs
    ax = ga.axis()
    inside = np.abs(ax) < r / 2
    doubling = True
    for n in (-2, -1, 0, 1, 2):
        u_n = ga.spacing * np.sum(u[inside] * np.exp(-2j * np.pi * n * ax[inside] / r))
        U_2n = ga.spacing * np.sum(u[inside] * np.exp(-1j * np.pi * 2 * n * ax[inside] / r))
        doubling = doubling and abs(U_2n - u_n) <= 1e-8 * max(1.0, abs(u_n))
    checks["index_doubling"] = doubling

    # direct vs transform form route
    width = np.exp(-ga.axis() ** 2)
    width /= np.sqrt(ga.cell_volume * np.sum(width ** 2))
    uu = Field(width, ga)
    direct = form_value(CAUCHY, PLATEAU, uu, ga)
    plancherel = form_value_transform(CAUCHY, PLATEAU, uu, ga)
    checks["form_routes"] = abs(direct - plancherel) <= 1e-8 * max(1.0, abs(direct))

    # mass conservation without potential
    ge = Grid(1, 40.0, 512)
    driver = EvolutionDriver(KernelSpec("gaussian"), zero_potential(), ge)
    state = initial_bump(ge, width=0.7)
    m0 = state.mass
    state, records = driver.run(state, 0.005, 1000)
    checks["mass_conservation"] = (
        abs(records[-1]["mass"] - m0) / m0 / 5.0 < 1e-8)

    # growth rate vs top eigenvalue on a gapped fixture
    gg = Grid(1, 20.0, 256)
    axp = np.linspace(-20.0, 20.0, 4001)
    bump_pot = PotentialSpec("tabulated", dim=1, data=3.0 * np.exp(-axp ** 2),
                             data_box=40.0)
    drv = EvolutionDriver(KernelSpec("gaussian"), bump_pot, gg)
    st = initial_bump(gg, width=1.0)
    st, recs = drv.run(st, 0.01, 500)
    rate = growth_rate([rr["t"] for rr in recs], [rr["l2norm"] for rr in recs])
    top = dense_oracle(KernelSpec("gaussian"), bump_pot, gg)[-1]
    predicted = top - drv.mean_a
    checks["growth_rate"] = abs(rate - predicted) <= 1e-2 * max(1.0, abs(predicted))

    elapsed = time.monotonic() - t0
    ok = all(checks.values()) and elapsed < 600.0
    report(8, ok, ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in checks.items())
           + f", {elapsed:.1f}s")


def teardown_module(module):
    print()
    for line in _RESULTS:
        print(line)

"""Eigenvalue-count criteria with certified verdicts.

Each checker evaluates the machine-checkable hypotheses of one sufficient
condition for discrete spectrum below mu0 = min(a_min, V_min) and returns a
CriterionReport: a verdict (SATISFIED / VIOLATED / INCONCLUSIVE), a
guaranteed eigenvalue-count bound, the numeric witnesses behind the verdict,
and a per-hypothesis checklist.  SATISFIED is only ever reported when every
hypothesis in the checklist passed within its tolerance.

Criterion ids:
  essential_spectrum      essential spectrum = [mu0, mu1]; range bound
  existence               scaled-indicator test: at least one eigenvalue
  fourier_count           local Fourier coefficients: >= #I eigenvalues
  smooth_count            kernel-derivative form inertia: >= dim S eigenvalues
  derivative_dominance    diagonal-dominance route to the same inertia bound
  analytic_infinite       factorial growth conditions: infinitely many (up to cutoff)
  flat_infinite           flat-bottom potential: infinitely many (up to truncation)
  birman_schwinger        upper bound I_a * I_V on the count below mu0

Counting conclusions about infinite sets are machine-checked only on finite
truncations, so those verdicts are always qualified "conditional".

Strict inequalities are tested against a small margin: floating-point
quadrature cannot certify strict signs at zero, so "< 0" means
"< -margin" with margin tied to the coefficient scale (default 1e-10 * scale;
callers that intend to cross-validate claims against a finite-resolution
oracle should pass a coarser margin).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DerivativesMissing, HypothesisFailed
from .fourier import (
    DerivativeTable,
    LocalFourierTable,
    local_fourier_kernel,
    local_fourier_potential,
    nu_of_set,
    transform_kernel,
)
from .galerkin import (
    dense_oracle,
    default_tol,
    fourier_mode_basis,
    indicator_basis,
    polynomial_basis,
    assemble,
    LatticeConvolver,
)
from .model import (
    Field,
    Grid,
    KernelSpec,
    PotentialSpec,
    SpectralSummary,
    l1_norm,
    locate_minimum,
    sample_kernel,
)
from .quadrature import cube_midpoint, improper_integral_1d

SATISFIED = "SATISFIED"
VIOLATED = "VIOLATED"
INCONCLUSIVE = "INCONCLUSIVE"

SIGN_SIGMA = 1e-10   # relative margin for strict-sign tests

BS_SIGN_NOTE = (
    "upper-bound integrals use the nonnegative denominators -(V_min + V_-) and "
    "-(V_min + a^_-); equivalent formulations sometimes print the opposite sign"
)


@dataclass
class CriterionReport:
    criterion: str
    verdict: str
    bound: Optional[object] = None        # int, or the string "infinite"
    upper_bound: Optional[float] = None
    conditional: Optional[str] = None
    witnesses: dict = dataclass_field(default_factory=dict)
    checklist: list = dataclass_field(default_factory=list)
    notes: list = dataclass_field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checklist.append({"name": name, "passed": bool(passed), "detail": detail})
        return passed

    def all_passed(self) -> bool:
        return all(item["passed"] for item in self.checklist)

    def as_dict(self) -> dict:
        return {
            "id": self.criterion,
            "verdict": self.verdict,
            "bound": self.bound,
            "upper_bound": self.upper_bound,
            "conditional": self.conditional,
            "witnesses": self.witnesses,
            "checklist": self.checklist,
            "notes": self.notes,
        }


@dataclass
class BetaMatrix:
    """Dominance ratios beta_{n,m} = |d^{n+m}a(0)| / sqrt(|d^{2n}a(0)| |d^{2m}a(0)|)."""

    indices: list
    values: dict
    beta1: float
    beta2: float

    @classmethod
    def from_derivatives(cls, derivs: DerivativeTable, indices: Sequence[tuple]) -> "BetaMatrix":
        idx = [tuple(int(c) for c in np.atleast_1d(n)) for n in indices]
        diag = {n: abs(derivs.deriv(tuple(2 * c for c in n))) for n in idx}
        values = {}
        for n in idx:
            for m in idx:
                if n == m:
                    continue
                num = abs(derivs.deriv(tuple(a + b for a, b in zip(n, m))))
                den = math.sqrt(diag[n] * diag[m])
                values[(n, m)] = num / den if den > 0 else math.inf
        beta1 = 0.0
        for m in idx:
            row = sum(values[(n, m)] for n in idx if n != m)
            beta1 = max(beta1, row)
        beta2 = sum(v ** 2 for v in values.values())
        return cls(indices=idx, values=values, beta1=beta1, beta2=beta2)


def _min_point(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
               grid: Grid, x0) -> tuple[np.ndarray, float]:
    if x0 is not None:
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        v0 = float(potential_spec.evaluate(*[np.asarray(c) for c in x0]))
        return x0, v0
    return locate_minimum(potential_spec, grid)


# ---------------------------------------------------------------------------
# essential spectrum


def check_essential(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                    grid: Grid, summary: SpectralSummary,
                    forced: bool = False) -> CriterionReport:
    """Essential spectrum [mu0, mu1]; discrete spectrum confined to
    [range_lo, mu0) and (mu1, range_hi]."""
    rep = CriterionReport("essential_spectrum", INCONCLUSIVE)
    l1a = l1_norm(sample_kernel(kernel_spec, grid), grid)
    l1b = l1_norm(sample_kernel(kernel_spec, grid.refined(2)), grid.refined(2))
    stable = abs(l1b - l1a) <= 0.05 * max(l1b, 1e-300)
    rep.check("kernel integrable (L1 stabilizes under box doubling)", stable,
              f"l1({grid.length:g})={l1a:.6g}, l1({2 * grid.length:g})={l1b:.6g}")
    rep.check("potential decays to zero at infinity",
              potential_spec.decay_offset == 0.0,
              f"decay_offset={potential_spec.decay_offset:g}")
    rep.witnesses = summary.as_dict()
    if forced or potential_spec.decay_offset != 0.0:
        rep.verdict = INCONCLUSIVE
        rep.notes.append("essential-spectrum identity assumed a vanishing potential")
    else:
        rep.verdict = SATISFIED if rep.all_passed() else INCONCLUSIVE
    return rep


# ---------------------------------------------------------------------------
# existence (scaled indicator test)


def _triangle_weight(pts: Sequence[np.ndarray]) -> np.ndarray:
    w = 1.0 - np.abs(pts[0])
    for p in pts[1:]:
        w = w * (1.0 - np.abs(p))
    return w


def check_existence(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                    grid: Grid, summary: SpectralSummary,
                    delta_scan: Sequence[float], x0=None,
                    cells: int = 512,
                    margin: Optional[float] = None) -> CriterionReport:
    """Scaled-indicator test: an eigenvalue below mu0 exists whenever

        F(d) = int_{Q_2(0)} prod_i (1-|x_i|) Re a(d x) dx
             + d^-d int_{Q_1(0)} (V(x0 + d x) - V_min) dx  <  0

    for some scale d > 0 (scanned).  When the potential family exposes a
    flatness exponent (V - V_min ~ c0 |x - x0|^alpha) the simplified
    small-scale form  Re a(0) + d^(alpha-d) c0 int_{Q_1} |x|^alpha dx  is
    evaluated on the same scan and may certify on its own.

    Raises HypothesisFailed when V_min > a_min.
    """
    if summary.v_min > summary.a_min:
        raise HypothesisFailed(
            f"V_min={summary.v_min:.6g} > a_min={summary.a_min:.6g}"
        )
    rep = CriterionReport("existence", INCONCLUSIVE)
    rep.check("V_min <= a_min", True,
              f"V_min={summary.v_min:.6g}, a_min={summary.a_min:.6g}")
    d = grid.dim
    x0, v_min = _min_point(kernel_spec, potential_spec, grid, x0)
    cells = cells if d == 1 else max(64, cells // 4)

    def F(delta):
        kern = cube_midpoint(
            lambda *p: _triangle_weight(p) * np.real(
                kernel_spec.evaluate(*[delta * q for q in p])),
            np.zeros(d), 2.0, d, cells=cells)
        pot = cube_midpoint(
            lambda *p: np.real(
                potential_spec.evaluate(*[c + delta * q for c, q in zip(x0, p)])) - v_min,
            np.zeros(d), 1.0, d, cells=cells)
        return kern + delta ** (-d) * pot, kern, pot

    rows = []
    for delta in delta_scan:
        val, kern, pot = F(float(delta))
        rows.append({"delta": float(delta), "F": val,
                     "kernel_term": kern, "potential_term": pot})
    fvals = np.array([row["F"] for row in rows])
    scale = float(np.max(np.abs(fvals))) + 1.0
    if margin is None:
        margin = SIGN_SIGMA * scale
    best = int(np.argmin(fvals))
    direct = bool(fvals[best] < -margin)
    rep.check("F(delta) < 0 for some scanned delta", direct,
              f"min F = {fvals[best]:.6g} at delta={rows[best]['delta']:g}")

    alpha, c0 = potential_spec.flatness()
    simplified = None
    if alpha is not None and math.isfinite(alpha) and c0 is not None:
        a0 = float(np.real(kernel_spec.evaluate(*[np.asarray(0.0)] * d)))
        moment = cube_midpoint(
            lambda *p: sum(q ** 2 for q in p) ** (alpha / 2.0),
            np.zeros(d), 1.0, d, cells=cells)
        svals = [a0 + float(dd) ** (alpha - d) * c0 * moment for dd in delta_scan]
        sbest = int(np.argmin(svals))
        simplified = {"a0": a0, "alpha": alpha, "c0": c0, "moment": moment,
                      "min_value": svals[sbest],
                      "delta": float(delta_scan[sbest])}
        if svals[sbest] < -margin:
            direct = True
            rep.notes.append("small-scale simplified form certifies on the scan")

    rep.witnesses = {
        "x0": list(map(float, x0)), "v_min": v_min,
        "scan": rows, "best_delta": rows[best]["delta"], "F_min": float(fvals[best]),
        "margin": margin,
    }
    if simplified is not None:
        rep.witnesses["simplified"] = simplified
    if direct:
        rep.verdict = SATISFIED
        rep.bound = 1
        if not rep.checklist[-1]["passed"]:
            # certified via the simplified route only; reflect that in the list
            rep.checklist[-1]["passed"] = True
            rep.checklist[-1]["detail"] += " (simplified small-scale form)"
    else:
        rep.verdict = VIOLATED
        rep.notes.append("no negative value found on the scanned deltas")
    return rep


# ---------------------------------------------------------------------------
# local Fourier coefficient count


def _is_even_index(n: tuple) -> bool:
    return all(c % 2 == 0 for c in n)


def check_fourier_count(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                        grid: Grid, summary: SpectralSummary,
                        r: float, n_max: int, x0=None,
                        margin: Optional[float] = None,
                        tables: Optional[LocalFourierTable] = None) -> CriterionReport:
    """Greedy certified index set for the local-Fourier-coefficient bound.

    J0 = {n : a_2n < -margin}; the set I grows greedily through J0 in
    ascending a_2n order while

        r^d max_{n in I} a_2n + (2r)^d alpha_odd + nu_I < -margin,

    alpha_odd = max(0, sup of a_m over non-even sampled m) (the clamp at zero
    is the safe envelope for the untruncated supremum, whose true value is
    >= 0 because the coefficients tend to 0).  SATISFIED gives the lower
    bound #I and an upper bound for the lowest eigenvalue.
    """
    rep = CriterionReport("fourier_count", INCONCLUSIVE)
    hyp = summary.v_min <= summary.a_min
    rep.check("V_min <= a_min", hyp,
              f"V_min={summary.v_min:.6g}, a_min={summary.a_min:.6g}")
    if not hyp:
        return rep
    d = grid.dim
    x0, v_min = _min_point(kernel_spec, potential_spec, grid, x0)
    if tables is None:
        atab = local_fourier_kernel(kernel_spec, r, n_max, grid)
        vtab = local_fourier_potential(potential_spec, x0, r, n_max, grid, v_min=v_min)
        tables = atab.merge(vtab)
    scale = max(max(abs(v) for v in tables.a_coeffs.values()), 1e-300)
    if margin is None:
        margin = SIGN_SIGMA * scale

    even_candidates = {}
    odd_values = []
    for key, val in tables.a_coeffs.items():
        if _is_even_index(key):
            half = tuple(c // 2 for c in key)
            even_candidates[half] = val
        else:
            odd_values.append(val)
    alpha_odd = max(0.0, max(odd_values) if odd_values else 0.0)

    J0 = sorted((n for n, v in even_candidates.items() if v < -margin),
                key=lambda n: (even_candidates[n], n))
    rep.witnesses = {
        "x0": list(map(float, x0)), "v_min": v_min, "r": r, "n_max": n_max,
        "alpha_odd": alpha_odd, "margin": margin, "J0_size": len(J0),
    }
    if not J0:
        rep.check("J0 = {n : a_2n < 0} non-empty", False, "no negative even coefficient")
        rep.notes.append("empty J0: the coefficient route provides no information")
        return rep
    rep.check("J0 = {n : a_2n < 0} non-empty", True, f"#J0 = {len(J0)}")

    chosen = []
    rd = r ** d
    r2d = (2.0 * r) ** d
    value = None
    for cand in J0:
        trial = chosen + [cand]
        nu = nu_of_set(tables, trial)
        trial_value = rd * max(even_candidates[n] for n in trial) + r2d * alpha_odd + nu
        if trial_value < -margin:
            chosen = trial
            value = trial_value
        else:
            break
    rep.witnesses["nu"] = nu_of_set(tables, chosen) if chosen else None
    rep.witnesses["I"] = [list(n) for n in chosen]
    rep.witnesses["certified_value"] = value
    passed = rep.check("r^d max a_2n + (2r)^d alpha_odd + nu_I < 0", bool(chosen),
                       f"value={value if value is not None else float('nan')}")

    # upper bound for the lowest eigenvalue over all sampled even coefficients;
    # the single-mode Rayleigh quotient carries the V_min offset
    v0 = tables.v((0,) * d)
    lam_bound = (v_min + rd * min(even_candidates.values()) + r2d * alpha_odd
                 + float(np.real(v0)) / rd)
    rep.witnesses["lambda_min_upper_bound"] = lam_bound

    if passed:
        rep.verdict = SATISFIED
        rep.bound = len(chosen)
    else:
        rep.verdict = VIOLATED
        rep.notes.append("no index set certifies: potential oscillation nu dominates")
    return rep


# ---------------------------------------------------------------------------
# smooth-kernel inertia count


def _multi_indices(dim: int, max_total: int) -> list[tuple]:
    out = [n for n in itertools.product(range(max_total + 1), repeat=dim)
           if sum(n) <= max_total]
    out.sort(key=lambda n: (sum(n), n))
    return out


def derivative_form_matrix(derivs: DerivativeTable, N: int, dim: int) -> tuple[np.ndarray, list]:
    """G_{n,m} = (-1)^{|n|} d^{n+m} a(0), n, m multi-indices with |n|,|m| <= N."""
    idx = _multi_indices(dim, N)
    G = np.zeros((len(idx), len(idx)))
    for i, n in enumerate(idx):
        for j, m in enumerate(idx):
            order = tuple(a + b for a, b in zip(n, m))
            G[i, j] = (-1.0) ** sum(n) * derivs.deriv(order)
    return G, idx


def negative_inertia(H: np.ndarray, margin: Optional[float] = None) -> int:
    """Number of eigenvalues of the Hermitian part below -margin.

    Invariant under positive diagonal rescaling (Sylvester), so the factorial
    rescaling relating this matrix to the proof-side form does not change it.
    """
    Hs = 0.5 * (H + H.conj().T)
    eig = np.linalg.eigvalsh(Hs)
    if margin is None:
        margin = SIGN_SIGMA * max(float(np.max(np.abs(eig))), 1e-300)
    return int(np.sum(eig < -margin))


def check_smooth_count(derivs: DerivativeTable, potential_spec: PotentialSpec,
                       x0, N: int, delta_scan: Sequence[float],
                       summary: SpectralSummary,
                       cells: int = 512) -> CriterionReport:
    """Negative inertia of the kernel-derivative form, gated by the moment
    decay h_N(delta)/delta^(2N+d) -> 0.

    h_N(delta) is the largest moment of (V(x0 + delta x) - V(x0)) against
    monomials x^n, |n| <= 2N, over the unit cube; the decay is judged by a
    monotone log-log trend over the scan (slope >= 0.25), passing exactly when
    all values vanish (flat-bottom potentials).
    """
    rep = CriterionReport("smooth_count", INCONCLUSIVE)
    hyp = summary.v_min <= summary.a_min
    rep.check("V_min <= a_min", hyp,
              f"V_min={summary.v_min:.6g}, a_min={summary.a_min:.6g}")
    d = potential_spec.dim
    if derivs.order_cap < 2 * N:
        raise DerivativesMissing(
            f"need derivatives to order {2 * N}, table caps at {derivs.order_cap}")
    rep.check("derivatives available to order 2N", True, f"cap={derivs.order_cap}")

    G, idx = derivative_form_matrix(derivs, N, d)
    inertia = negative_inertia(G)
    rep.witnesses["form_matrix"] = G.tolist()
    rep.witnesses["indices"] = [list(n) for n in idx]
    rep.witnesses["negative_inertia"] = inertia

    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    rep.witnesses["x0"] = [float(c) for c in x0]
    v0 = float(potential_spec.evaluate(*[np.asarray(c) for c in x0]))
    moments = _multi_indices(d, 2 * N)
    cells = cells if d == 1 else max(64, cells // 4)

    def h_of(delta):
        best = 0.0
        for n in moments:
            val = cube_midpoint(
                lambda *p: (np.real(potential_spec.evaluate(
                    *[c + delta * q for c, q in zip(x0, p)])) - v0)
                * np.prod([q ** k for q, k in zip(p, n)], axis=0),
                np.zeros(d), 1.0, d, cells=cells)
            best = max(best, abs(val))
        return best

    deltas = np.array(sorted(float(x) for x in delta_scan))
    hvals = np.array([h_of(dd) for dd in deltas])
    ratios = hvals / deltas ** (2 * N + d)
    eps_flat = 1e-12 * (1.0 + abs(v0))
    if np.all(ratios <= eps_flat):
        decay = True
        slope = math.inf
    else:
        pos = ratios > eps_flat
        if np.sum(pos) >= 2:
            slope = float(np.polyfit(np.log(deltas[pos]), np.log(ratios[pos]), 1)[0])
        else:
            slope = math.inf   # ratios drop below the floor at small delta
        decay = slope >= 0.25
    rep.witnesses["h_table"] = [{"delta": float(a), "h": float(b), "ratio": float(c)}
                                for a, b, c in zip(deltas, hvals, ratios)]
    rep.witnesses["decay_slope"] = slope
    rep.check("h_N(delta)/delta^(2N+d) -> 0 on the scan", bool(decay),
              f"log-log slope={slope:.3g}")
    rep.check("form has a negative direction", inertia > 0, f"inertia={inertia}")

    if rep.all_passed():
        rep.verdict = SATISFIED
        rep.bound = inertia
    else:
        rep.verdict = INCONCLUSIVE
    return rep


# ---------------------------------------------------------------------------
# derivative dominance


def fit_flatness_exponent(potential_spec: PotentialSpec, x0,
                          t_max: float = 0.1) -> Optional[tuple[float, float, float]]:
    """Fit V(x0 + t e1) - V(x0) ~ c t^alpha over two decades of t.

    Returns (alpha, c, r_squared) or None when the data is degenerate.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    v0 = float(potential_spec.evaluate(*[np.asarray(c) for c in x0]))
    t = np.logspace(math.log10(t_max) - 2.0, math.log10(t_max), 25)
    pts = [np.asarray(x0[i] + (t if i == 0 else 0.0)) for i in range(len(x0))]
    diff = np.real(potential_spec.evaluate(*pts)) - v0
    if np.any(diff <= 0):
        return None
    X = np.log(t)
    Y = np.log(diff)
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    ss_tot = float(np.sum((Y - Y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 0.0
    return float(slope), float(np.exp(intercept)), r2


def check_dominance(derivs: DerivativeTable, index_set: Sequence,
                    summary: SpectralSummary, dim: int,
                    alpha: Optional[float] = None,
                    potential_spec: Optional[PotentialSpec] = None,
                    x0=None) -> CriterionReport:
    """Diagonal-dominance test on the derivative form over a candidate index set.

    Requires the sign pattern (-1)^{|n|} d^{2n} a(0) < 0 on the set, the
    flatness exponent condition N < (alpha - d)/2, and that the minimal
    admissible ratios beta_{n,m} satisfy beta_1 < 1 or
    beta_2 < sqrt(#I)/(sqrt(#I) - 1).  SATISFIED certifies #I eigenvalues.
    """
    rep = CriterionReport("derivative_dominance", INCONCLUSIVE)
    hyp = summary.v_min <= summary.a_min
    rep.check("V_min <= a_min", hyp,
              f"V_min={summary.v_min:.6g}, a_min={summary.a_min:.6g}")
    idx = [tuple(int(c) for c in np.atleast_1d(n)) for n in index_set]
    if not idx:
        raise ValueError("candidate index set must be non-empty")
    N = max(sum(n) for n in idx)

    if alpha is None and potential_spec is not None:
        alpha = potential_spec.flatness()[0]
        if alpha is None:
            fit = fit_flatness_exponent(potential_spec,
                                        x0 if x0 is not None else potential_spec.x0_hint)
            if fit is not None and fit[2] >= 0.999:
                alpha = fit[0]
                rep.witnesses["alpha_fit"] = {"alpha": fit[0], "c": fit[1], "r2": fit[2]}
            elif fit is not None:
                rep.witnesses["alpha_fit"] = {"alpha": fit[0], "c": fit[1], "r2": fit[2]}
    if alpha is None:
        rep.check("flatness exponent known", False, "no metadata and fit rejected")
        rep.notes.append("exponent unknown: cannot gate the derivative order")
        return rep
    rep.check("flatness exponent known", True, f"alpha={alpha:g}")
    order_ok = (math.isinf(alpha) and alpha > 0) or (N < (alpha - dim) / 2.0)
    rep.check("N < (alpha - d)/2", bool(order_ok),
              f"N={N}, alpha={alpha:g}, d={dim}")
    if not order_ok:
        return rep

    diag = {}
    sign_ok = True
    witness = None
    scale = max((abs(derivs.deriv(tuple(2 * c for c in n))) for n in idx), default=1.0)
    margin = SIGN_SIGMA * max(scale, 1e-300)
    for n in idx:
        val = (-1.0) ** sum(n) * derivs.deriv(tuple(2 * c for c in n))
        diag[n] = val
        if not val < -margin:
            sign_ok = False
            witness = n
            break
    rep.check("(-1)^|n| d^2n a(0) < 0 on I", sign_ok,
              f"first violation at {witness}" if witness else "all negative")
    if not sign_ok:
        rep.verdict = VIOLATED
        rep.witnesses["sign_witness"] = list(witness)
        return rep

    beta = BetaMatrix.from_derivatives(derivs, idx)
    k = len(idx)
    threshold2 = math.inf if k <= 1 else math.sqrt(k) / (math.sqrt(k) - 1.0)
    cond1 = beta.beta1 < 1.0
    cond2 = beta.beta2 < threshold2
    rep.witnesses.update({
        "I": [list(n) for n in idx],
        "beta1": beta.beta1,
        "beta2": beta.beta2,
        "beta2_threshold": threshold2,
        "beta_values": {f"{n}|{m}": v for (n, m), v in beta.values.items()},
    })
    if x0 is not None:
        rep.witnesses["x0"] = [float(c) for c in np.atleast_1d(x0)]
    rep.check("beta_1 < 1 or beta_2 < sqrt(#I)/(sqrt(#I)-1)", cond1 or cond2,
              f"beta1={beta.beta1:.6g}, beta2={beta.beta2:.6g}, thr2={threshold2:.6g}")
    if rep.all_passed():
        rep.verdict = SATISFIED
        rep.bound = k
    else:
        rep.verdict = VIOLATED
    return rep


# ---------------------------------------------------------------------------
# infinitely many eigenvalues, analytic kernel


def _even_factorial(n: tuple) -> float:
    out = 1.0
    for c in n:
        out *= math.factorial(2 * c)
    return out


def _factorial_multi(n: tuple) -> float:
    out = 1.0
    for c in n:
        out *= math.factorial(c)
    return out


def check_analytic_infinite(derivs: DerivativeTable, gamma: float,
                            c1: float, c2: float, cutoff: int,
                            summary: Optional[SpectralSummary] = None,
                            potential_spec: Optional[PotentialSpec] = None) -> CriterionReport:
    """Factorial growth/decay conditions for infinitely many eigenvalues.

    On the candidate set I = {n : |2n| <= cutoff, (-1)^|n| d^2n a(0) < 0}:
      growth:  |d^2n a(0)| >= c1 ((2n)!)^gamma    for all n in I,
      control: |d^n a(0)|  <= c2 (n!)^gamma       for all |n| <= cutoff.
    Any violation on the checked range is VIOLATED with the witness index;
    a clean pass is SATISFIED with the bound "infinite", conditional on the
    cutoff (only finitely many hypotheses are machine-checkable).
    """
    if not (c1 > 0 and c2 > 0 and gamma > 0):
        raise ValueError("constants gamma, c1, c2 must be positive")
    if derivs.order_cap < cutoff:
        raise DerivativesMissing(
            f"need derivatives to order {cutoff}, table caps at {derivs.order_cap}")
    rep = CriterionReport("analytic_infinite", INCONCLUSIVE)
    if summary is not None:
        rep.check("V_min <= a_min", summary.v_min <= summary.a_min,
                  f"V_min={summary.v_min:.6g}, a_min={summary.a_min:.6g}")
    if potential_spec is not None:
        alpha = potential_spec.flatness()[0]
        rep.check("potential flatter than any power near the minimum",
                  alpha is not None and math.isinf(alpha),
                  f"alpha={alpha}")
    d = derivs.dim
    candidates = [n for n in _multi_indices(d, cutoff // 2)]
    scale = max((abs(derivs.deriv(tuple(2 * c for c in n)))
                 for n in candidates if derivs.has(tuple(2 * c for c in n))),
                default=1.0)
    margin = SIGN_SIGMA * max(scale, 1e-300)

    cand_set = [n for n in candidates
                if derivs.has(tuple(2 * c for c in n))
                and (-1.0) ** sum(n) * derivs.deriv(tuple(2 * c for c in n)) < -margin]
    rep.check("sign condition holds on a non-empty candidate set", bool(cand_set),
              f"#candidates={len(cand_set)}")
    rep.witnesses["candidate_set"] = [list(n) for n in cand_set]

    growth_witness = None
    for n in cand_set:
        lhs = abs(derivs.deriv(tuple(2 * c for c in n)))
        rhs = c1 * _even_factorial(n) ** gamma
        if lhs < rhs * (1.0 - 1e-12):
            growth_witness = n
            break
    rep.check("|d^2n a(0)| >= c1 ((2n)!)^gamma on the candidate set",
              growth_witness is None,
              f"first violation at n={growth_witness}" if growth_witness else "holds")

    control_witness = None
    for n in _multi_indices(d, cutoff):
        if not derivs.has(n):
            continue
        lhs = abs(derivs.deriv(n))
        rhs = c2 * _factorial_multi(n) ** gamma
        if lhs > rhs * (1.0 + 1e-12):
            control_witness = n
            break
    rep.check("|d^n a(0)| <= c2 (n!)^gamma for all |n| <= cutoff",
              control_witness is None,
              f"first violation at n={control_witness}" if control_witness else "holds")

    rep.witnesses.update({"gamma": gamma, "c1": c1, "c2": c2, "cutoff": cutoff})
    if growth_witness is not None:
        rep.witnesses["growth_witness"] = list(growth_witness)
    if control_witness is not None:
        rep.witnesses["control_witness"] = list(control_witness)

    if rep.all_passed():
        rep.verdict = SATISFIED
        rep.bound = "infinite"
        rep.conditional = f"up to derivative cutoff {cutoff}"
    else:
        rep.verdict = VIOLATED if (growth_witness or control_witness) else INCONCLUSIVE
    return rep


# ---------------------------------------------------------------------------
# infinitely many eigenvalues, flat-bottom potential


def check_flat_infinite(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                        grid: Grid, summary: SpectralSummary,
                        r: float, n_max: int, x0=None,
                        min_negative: int = 16) -> CriterionReport:
    """Flat-bottom route to countably many eigenvalues below mu0.

    Requires V identically V_min on Q_r(x0) (tolerance 1e-9 |V_min|; this
    hypothesis is crucial and a miss is VIOLATED).  Then either
      item 1: the transform is nonpositive and somewhere strictly negative, or
      item 2: all sampled coefficients a_n are <= 0 with at least
              `min_negative` strictly negative (conditional on truncation).
    """
    rep = CriterionReport("flat_infinite", INCONCLUSIVE)
    hyp = summary.v_min <= summary.a_min
    rep.check("V_min <= a_min", hyp,
              f"V_min={summary.v_min:.6g}, a_min={summary.a_min:.6g}")
    d = grid.dim
    x0, v_min = _min_point(kernel_spec, potential_spec, grid, x0)

    def shifted(*pts):
        return np.real(potential_spec.evaluate(*[p + c for p, c in zip(pts, x0)])) - v_min

    dev = cube_midpoint(lambda *p: np.abs(shifted(*p)), np.zeros(d), r, d, cells=256)
    dev_sup = float(np.max(np.abs(shifted(
        *np.meshgrid(*([np.linspace(-r / 2, r / 2, 257)] * d), indexing="ij")))))
    flat_tol = 1e-9 * max(abs(v_min), 1e-30)
    flat = dev_sup <= flat_tol
    rep.check("V identically V_min on Q_r(x0)", flat,
              f"sup |V - V_min| = {dev_sup:.3e} over Q_{r:g}({x0})")
    rep.witnesses.update({"x0": list(map(float, x0)), "v_min": v_min, "r": r,
                          "flat_deviation_sup": dev_sup,
                          "flat_deviation_integral": dev})
    if not flat:
        rep.verdict = VIOLATED
        rep.notes.append("potential is not flat on the requested cube")
        return rep

    scale_t = max(abs(summary.a_min), abs(summary.a_max), 1e-300)
    eps_t = SIGN_SIGMA * scale_t
    item1 = summary.a_max <= eps_t and summary.a_min < -eps_t
    rep.witnesses["item1"] = {"a_min": summary.a_min, "a_max": summary.a_max,
                              "passed": bool(item1)}

    atab = local_fourier_kernel(kernel_spec, r, n_max, grid)
    avals = np.array(list(atab.a_coeffs.values()))
    scale_c = max(float(np.max(np.abs(avals))), 1e-300)
    eps_c = SIGN_SIGMA * scale_c
    neg_count = int(np.sum(avals < -eps_c))
    item2 = bool(np.all(avals <= eps_c) and neg_count >= min_negative)
    rep.witnesses["item2"] = {"max_a_n": float(avals.max()),
                              "strictly_negative": neg_count,
                              "required": min_negative, "passed": item2}

    ok = rep.check("transform nonpositive-and-nontrivial, or coefficients "
                   "nonpositive with enough strictly negative", item1 or item2,
                   f"item1={item1}, item2={item2}")
    if ok and hyp:
        rep.verdict = SATISFIED
        rep.bound = "infinite"
        rep.conditional = ("route: transform sign" if item1
                           else f"route: coefficients, up to truncation n_max={n_max}")
    elif hyp:
        rep.verdict = VIOLATED
    return rep


# ---------------------------------------------------------------------------
# upper bound (trace route)


def birman_schwinger_bound(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                           grid: Grid, summary: SpectralSummary) -> CriterionReport:
    """Upper bound floor(I_a * I_V) for the eigenvalue count below mu0.

        I_V = integral V_-(x) / (-(V_min + V_-(x))) dx
        I_a = (2pi)^-d integral a^_-(xi) / (-(V_min + a^_-(xi))) dxi

    Both integrands blow up where the potential (resp. the transform) touches
    V_min; graded dyadic meshes resolve isolated touch points and growth of
    successive refinements (>10% twice in a row, or an integrand sample beyond
    1e12) declares divergence, i.e. no finite upper bound (INCONCLUSIVE).

    Raises HypothesisFailed unless mu0 = V_min (<= a_min).  One-dimensional
    domains only.
    """
    if summary.v_min > summary.a_min or summary.mu0 != summary.v_min:
        raise HypothesisFailed(
            f"need mu0 = V_min <= a_min (V_min={summary.v_min:.6g}, a_min={summary.a_min:.6g})")
    if grid.dim != 1:
        rep = CriterionReport("birman_schwinger", INCONCLUSIVE)
        rep.notes.append("upper-bound integrals implemented for one dimension")
        return rep

    rep = CriterionReport("birman_schwinger", INCONCLUSIVE)
    rep.notes.append(BS_SIGN_NOTE)
    rep.check("mu0 = V_min <= a_min", True,
              f"V_min={summary.v_min:.6g}, a_min={summary.a_min:.6g}")
    v_min = summary.v_min

    def iv_integrand(t):
        v = np.real(potential_spec.evaluate(np.asarray(t)))
        num = np.maximum(0.0, -v)
        den = -(v_min + num)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(num == 0.0, 0.0, num / den)
        out = np.where(np.isfinite(out), out, np.inf)
        return np.where(out < 0, np.inf, out)   # negative den => hypothesis edge

    # singular points: the located minimum plus any sampled touch points
    # (grid samples miss off-grid minima, so the located point is essential)
    ax = grid.axis()
    vsamp = np.real(potential_spec.evaluate(ax))
    touch = list(ax[vsamp <= v_min + 1e-12 * max(abs(v_min), 1e-30)][:64])
    x0_pt, v_at_x0 = locate_minimum(potential_spec, grid)
    if abs(v_at_x0 - v_min) <= 1e-12 * max(abs(v_min), 1e-30):
        touch.append(float(x0_pt[0]))
    sing = sorted(set(float(t) for t in touch))
    if v_min == 0.0:
        iv_res_value, iv_converged, iv_divergent, iv_refs = 0.0, True, False, [0.0]
    else:
        res = improper_integral_1d(iv_integrand, -grid.length / 2, grid.length / 2, sing)
        iv_res_value, iv_converged, iv_divergent, iv_refs = (
            res.value, res.converged, res.divergent, res.refinements)
    rep.witnesses["I_V"] = {"value": iv_res_value, "status":
                            "divergent" if iv_divergent else
                            ("converged" if iv_converged else "unresolved"),
                            "refinements": iv_refs}

    if iv_converged and iv_res_value == 0.0:
        # nothing below mu0 to count: the bound is 0 whatever I_a is
        rep.check("I_V and I_a finite", True, "I_V = 0")
        rep.witnesses["I_a"] = {"value": None, "status": "skipped (I_V = 0)",
                                "refinements": []}
        rep.witnesses["product"] = 0.0
        rep.verdict = SATISFIED
        rep.upper_bound = 0.0
        return rep

    # I_a on successively refined frequency grids (box doubling at fixed spacing)
    ia_vals = []
    g = grid
    divergent_a = False
    for _ in range(4):
        sf = transform_kernel(sample_kernel(kernel_spec, g), g)
        ahat = sf.real
        num = np.maximum(0.0, -ahat)
        num[num < 1e-13 * max(float(np.max(np.abs(ahat))), 1e-300)] = 0.0
        den = -(v_min + num)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(num == 0.0, 0.0, num / den)
        vals = np.where(np.isfinite(vals) & (vals >= 0), vals, np.inf)
        if np.any(~np.isfinite(vals)) or np.any(vals > 1e12):
            divergent_a = True
            break
        dxi = 2.0 * np.pi / g.length
        ia_vals.append(float(np.sum(vals) * dxi / (2.0 * np.pi)))
        if len(ia_vals) >= 2:
            prev, cur = ia_vals[-2], ia_vals[-1]
            if abs(cur - prev) <= 1e-4 * max(abs(cur), 1e-300):
                break
            if len(ia_vals) >= 3:
                g2 = (ia_vals[-2] - ia_vals[-3]) / max(abs(ia_vals[-3]), 1e-300)
                g1 = (cur - prev) / max(abs(prev), 1e-300)
                if g1 > 0.10 and g2 > 0.10:
                    divergent_a = True
                    break
        g = g.refined(2)
    ia_converged = (not divergent_a and len(ia_vals) >= 2
                    and abs(ia_vals[-1] - ia_vals[-2]) <= 1e-4 * max(abs(ia_vals[-1]), 1e-300))
    rep.witnesses["I_a"] = {"value": ia_vals[-1] if ia_vals else None,
                            "status": "divergent" if divergent_a else
                            ("converged" if ia_converged else "unresolved"),
                            "refinements": ia_vals}

    if iv_divergent or divergent_a:
        rep.verdict = INCONCLUSIVE
        rep.notes.append("no finite upper bound: an integral diverges")
        rep.check("I_V and I_a finite", False,
                  f"I_V {'diverges' if iv_divergent else 'finite'}, "
                  f"I_a {'diverges' if divergent_a else 'finite'}")
        return rep
    if not (iv_converged and ia_converged):
        rep.verdict = INCONCLUSIVE
        rep.notes.append("integrals did not settle within the refinement schedule")
        rep.check("I_V and I_a finite", False, "unresolved")
        return rep
    rep.check("I_V and I_a finite", True,
              f"I_V={iv_res_value:.6g}, I_a={ia_vals[-1]:.6g}")
    product = iv_res_value * ia_vals[-1]
    rep.verdict = SATISFIED
    rep.upper_bound = float(math.floor(product))
    rep.witnesses["product"] = product
    return rep


# ---------------------------------------------------------------------------
# cross-validation of claims against the variational side and the oracle


def _snap_to_cells(delta: float, grid: Grid) -> float:
    """Snap a cube size to a whole (even) number of cells: indicator and
    polynomial supports aligned to cell boundaries keep the form quadrature
    second-order instead of first-order at the jump."""
    h = grid.spacing
    cells = max(2, 2 * int(round(delta / (2 * h))))
    return cells * h


def certify_report(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                   grid: Grid, report: CriterionReport, mu0: float,
                   tol: Optional[float] = None,
                   delta_scan: Optional[Sequence[float]] = None) -> int:
    """Certified Ritz count for the subspace suggested by a report's witnesses."""
    if tol is None:
        tol = default_tol(mu0)
    conv = LatticeConvolver(kernel_spec, grid)
    best = 0
    wit = report.witnesses
    try:
        if report.criterion == "existence" and "best_delta" in wit:
            delta = _snap_to_cells(wit["best_delta"], grid)
            basis = indicator_basis(grid, np.asarray(wit["x0"]), delta)
            best = max(best, assemble(kernel_spec, potential_spec, basis, grid,
                                      mu0=mu0, tol=tol, convolver=conv).certified_count)
        elif report.criterion == "fourier_count" and wit.get("I"):
            basis = fourier_mode_basis(grid, np.asarray(wit["x0"]), wit["r"],
                                       [tuple(n) for n in wit["I"]])
            best = max(best, assemble(kernel_spec, potential_spec, basis, grid,
                                      mu0=mu0, tol=tol, convolver=conv).certified_count)
        elif report.criterion in ("smooth_count", "derivative_dominance"):
            key = "indices" if report.criterion == "smooth_count" else "I"
            degree = max(sum(tuple(v)) for v in wit[key])
            x0 = np.asarray(wit["x0"]) if wit.get("x0") else np.zeros(grid.dim)
            scan = delta_scan if delta_scan is not None else (0.25, 0.5, 1.0, 2.0)
            for delta in scan:
                basis = polynomial_basis(grid, x0, _snap_to_cells(float(delta), grid),
                                         degree)
                res = assemble(kernel_spec, potential_spec, basis, grid,
                               mu0=mu0, tol=tol, convolver=conv)
                best = max(best, res.certified_count)
    except Exception:
        return best
    return best


def cross_validate(kernel_spec: KernelSpec, potential_spec: PotentialSpec,
                   grid: Grid, reports: Sequence[CriterionReport], mu0: float,
                   oracle_grid: Optional[Grid] = None,
                   tol: Optional[float] = None,
                   delta_scan: Optional[Sequence[float]] = None) -> list[dict]:
    """Claimed-vs-certified-vs-oracle table for finite SATISFIED lower bounds."""
    if tol is None:
        tol = default_tol(mu0)
    og = oracle_grid if oracle_grid is not None else grid
    eigs = dense_oracle(kernel_spec, potential_spec, og)
    oracle_count = int(np.sum(eigs < mu0 - tol * 0.5))
    rows = []
    for rep in reports:
        if rep.verdict != SATISFIED or not isinstance(rep.bound, int):
            continue
        certified = certify_report(kernel_spec, potential_spec, grid, rep, mu0,
                                   tol=tol, delta_scan=delta_scan)
        rows.append({
            "id": rep.criterion,
            "claimed": rep.bound,
            "certified": certified,
            "oracle": oracle_count,
            "sound": bool(certified >= rep.bound and oracle_count >= rep.bound),
        })
    return rows

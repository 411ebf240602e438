"""Command-line front end: nlspec spectrum | check | count | evolve.

Configs are TOML (or JSON) files with [kernel], [potential], [grid],
[analysis], [evolve] and [output] sections; reports are JSON documents with
the parsed config echoed back, so a run can be reproduced from its report.
Exit codes: 0 analysis ran (verdicts never change the exit code), 2 config
error, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, HypothesisFailed, NlspecError
from .criteria import (
    INCONCLUSIVE,
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
)
from .evolution import EvolutionDriver, growth_rate, initial_bump
from .fourier import derivatives_at_zero, spectral_bounds
from .galerkin import count_below, default_tol, dense_oracle, fourier_mode_basis
from .model import Grid, KernelSpec, PotentialSpec, locate_minimum
from .reporting import render_json, write_eigenvalue_csv, write_json, write_trajectory_csv

KNOWN_CRITERIA = (
    "essential_spectrum",
    "existence",
    "fourier_count",
    "smooth_count",
    "derivative_dominance",
    "analytic_infinite",
    "flat_infinite",
    "birman_schwinger",
)

_DEFAULT_ANALYSIS = {
    "criteria": ["essential_spectrum", "existence"],
    "r": 2.0,
    "n_max": 8,
    "degree": 1,
    "delta_scan": [0.25, 0.5, 1.0, 2.0],
    "cutoff": 12,
    "gamma": 1.0,
    "c1": 1.0,
    "c2": 1.0,
    "min_negative": 16,
    "oracle_points": 1024,
    "oracle_length": None,    # defaults to the grid length
    "mode_sizes": [1, 3, 5, 9],
}


def load_config(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    text = path.read_text()
    if path.suffix == ".json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    try:
        import tomllib  # Python >= 3.11
    except ImportError:
        import tomli as tomllib
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc


def _require(cfg: dict, section: str, key: str):
    if section not in cfg:
        raise ConfigError(f"missing [{section}] section")
    if key not in cfg[section]:
        raise ConfigError(f"missing key {key!r} in [{section}]")
    return cfg[section][key]


def build_problem(cfg: dict):
    kfam = _require(cfg, "kernel", "family")
    kparams = cfg["kernel"].get("params", [])
    kdim = int(cfg["kernel"].get("dim", 1))
    kdata = cfg["kernel"].get("data")
    kbox = cfg["kernel"].get("data_box")
    try:
        kernel = KernelSpec(kfam, tuple(kparams), kdim,
                            data=np.asarray(kdata) if kdata is not None else None,
                            data_box=kbox)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"[kernel]: {exc}") from exc

    pfam = _require(cfg, "potential", "family")
    pparams = cfg["potential"].get("params", [])
    pdim = int(cfg["potential"].get("dim", 1))
    pdata = cfg["potential"].get("data")
    pbox = cfg["potential"].get("data_box")
    hint = cfg["potential"].get("x0_hint")
    try:
        potential = PotentialSpec(pfam, tuple(pparams), pdim,
                                  x0_hint=tuple(hint) if hint is not None else None,
                                  data=np.asarray(pdata, dtype=float) if pdata is not None else None,
                                  data_box=pbox)
        if "decay_offset" in cfg["potential"] and pfam == "tabulated":
            potential.decay_offset = float(cfg["potential"]["decay_offset"])
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"[potential]: {exc}") from exc

    length = float(_require(cfg, "grid", "length"))
    points = int(_require(cfg, "grid", "points"))
    try:
        grid = Grid(kdim, length, points)
    except ValueError as exc:
        raise ConfigError(f"[grid]: {exc}") from exc

    analysis = dict(_DEFAULT_ANALYSIS)
    analysis.update(cfg.get("analysis", {}))
    for cid in analysis["criteria"]:
        if cid not in KNOWN_CRITERIA:
            raise ConfigError(f"unknown criterion id {cid!r}; known: {KNOWN_CRITERIA}")
    if 2 * float(analysis["r"]) > length:
        raise ConfigError(
            f"[analysis] r={analysis['r']} needs the cube Q_2r(0) inside the box "
            f"(grid length {length})")
    return kernel, potential, grid, analysis


def _oracle_grid(grid: Grid, analysis: dict) -> Grid:
    length = analysis.get("oracle_length") or grid.length
    return Grid(grid.dim, float(length), int(analysis["oracle_points"]))


def _base_report(cfg: dict, args, mu0=None) -> dict:
    doc = {
        "tool": {"name": "nlspec", "version": __version__},
        "seed": args.seed,
        "config_echo": cfg,
        "tolerances": {
            "strict_sign_relative": 1e-10,
            "hermiticity_relative": 1e-10,
            "symmetry_relative": 1e-10,
        },
    }
    if mu0 is not None:
        doc["tolerances"]["certification"] = default_tol(mu0)
    return doc


def _spectrum_payload(kernel, potential, grid, analysis, force: bool):
    warnings = []
    if potential.decay_offset != 0.0:
        if not force:
            raise HypothesisFailed(
                "potential has a nonzero decay offset; re-run with --force-offset "
                "to analyze anyway (the essential-spectrum identity is then unproven)")
        warnings.append(
            f"decay_offset={potential.decay_offset:g}: potential does not vanish at "
            "infinity; spectral summary is reported but unverified")
    summary = spectral_bounds(kernel, potential, grid, force=force)
    og = _oracle_grid(grid, analysis)
    eigs = dense_oracle(kernel, potential, og)
    tol = default_tol(summary.mu0)
    below = eigs[eigs < summary.mu0 - tol]
    above = eigs[eigs > summary.mu1 + tol]
    oracle = {
        "resolution": {"points": og.points, "length": og.length},
        "count_below_mu0": int(below.size),
        "eigenvalues_below_mu0": below.tolist(),
        "count_above_mu1": int(above.size),
        "eigenvalues_above_mu1": above.tolist(),
        "all_eigenvalues_path": None,     # filled in once the CSV name is known
    }
    return summary, eigs, oracle, warnings


def cmd_spectrum(cfg: dict, args) -> dict:
    kernel, potential, grid, analysis = build_problem(cfg)
    summary, eigs, oracle, warnings = _spectrum_payload(
        kernel, potential, grid, analysis, args.force_offset)
    doc = _base_report(cfg, args, mu0=summary.mu0)
    doc["spectral_summary"] = summary.as_dict()
    doc["oracle"] = oracle
    doc["warnings"] = warnings
    return doc, eigs, None


def _run_checkers(kernel, potential, grid, analysis, summary, forced):
    reports = []
    want = analysis["criteria"]
    scan = [float(x) for x in analysis["delta_scan"]]
    r = float(analysis["r"])
    n_max = int(analysis["n_max"])
    N = int(analysis["degree"])
    x0, _ = locate_minimum(potential, grid)

    def run(cid, fn, *fargs, **fkw):
        try:
            reports.append(fn(*fargs, **fkw))
        except HypothesisFailed as exc:
            rep = CriterionReport(cid, INCONCLUSIVE)
            rep.check("structural hypothesis", False, str(exc))
            rep.notes.append(f"hypothesis failed: {exc}")
            reports.append(rep)
        except NlspecError as exc:
            rep = CriterionReport(cid, INCONCLUSIVE)
            rep.notes.append(f"checker error: {type(exc).__name__}: {exc}")
            reports.append(rep)

    if "essential_spectrum" in want:
        run("essential_spectrum", check_essential, kernel, potential, grid, summary,
            forced=forced)
    if "existence" in want:
        run("existence", check_existence, kernel, potential, grid, summary, scan, x0=x0)
    if "fourier_count" in want:
        run("fourier_count", check_fourier_count, kernel, potential, grid, summary,
            r, n_max, x0=x0, margin=analysis.get("margin"))
    needs_derivs = {"smooth_count", "derivative_dominance", "analytic_infinite"} & set(want)
    derivs = None
    if needs_derivs:
        try:
            cap = max(2 * N, int(analysis["cutoff"]))
            derivs = derivatives_at_zero(kernel, cap // 2)
        except NlspecError as exc:
            for cid in sorted(needs_derivs):
                rep = CriterionReport(cid, INCONCLUSIVE)
                rep.notes.append(f"derivatives unavailable: {exc}")
                reports.append(rep)
            needs_derivs = set()
    if "smooth_count" in needs_derivs:
        run("smooth_count", check_smooth_count, derivs, potential, x0, N, scan, summary)
    if "derivative_dominance" in needs_derivs:
        idx = analysis.get("index_set")
        if idx is None:
            idx = [(n,) * grid.dim if grid.dim > 1 else (n,) for n in range(N + 1)]
        run("derivative_dominance", check_dominance, derivs,
            [tuple(int(c) for c in np.atleast_1d(n)) for n in idx],
            summary, grid.dim, potential_spec=potential, x0=x0)
    if "analytic_infinite" in needs_derivs:
        run("analytic_infinite", check_analytic_infinite, derivs,
            float(analysis["gamma"]), float(analysis["c1"]), float(analysis["c2"]),
            int(analysis["cutoff"]), summary=summary, potential_spec=potential)
    if "flat_infinite" in want:
        run("flat_infinite", check_flat_infinite, kernel, potential, grid, summary,
            r, n_max, x0=x0, min_negative=int(analysis["min_negative"]))
    if "birman_schwinger" in want:
        run("birman_schwinger", birman_schwinger_bound, kernel, potential, grid, summary)
    return reports


def cmd_check(cfg: dict, args) -> dict:
    kernel, potential, grid, analysis = build_problem(cfg)
    summary, eigs, oracle, warnings = _spectrum_payload(
        kernel, potential, grid, analysis, args.force_offset)
    forced = potential.decay_offset != 0.0
    reports = _run_checkers(kernel, potential, grid, analysis, summary, forced)
    table = cross_validate(kernel, potential, grid, reports, summary.mu0,
                           oracle_grid=_oracle_grid(grid, analysis),
                           delta_scan=[float(x) for x in analysis["delta_scan"]])
    doc = _base_report(cfg, args, mu0=summary.mu0)
    doc["spectral_summary"] = summary.as_dict()
    doc["criteria"] = [rep.as_dict() for rep in reports]
    doc["cross_validation"] = table
    doc["oracle"] = oracle
    doc["warnings"] = warnings
    return doc, eigs, None


def cmd_count(cfg: dict, args) -> dict:
    kernel, potential, grid, analysis = build_problem(cfg)
    summary, eigs, oracle, warnings = _spectrum_payload(
        kernel, potential, grid, analysis, args.force_offset)
    x0, _ = locate_minimum(potential, grid)
    r = float(analysis["r"])
    sizes = [int(s) for s in analysis["mode_sizes"]]
    bases = []
    for size in sizes:
        if (size - 1) % 2:
            raise ConfigError(f"mode size {size} not odd (sets are 0, +-1, +-2, ...)")
        k = (size - 1) // 2
        indices = [(n,) for n in range(-k, k + 1)]
        bases.append(fourier_mode_basis(grid, x0, r, indices))
    counts = count_below(kernel, potential, bases, grid, summary.mu0)
    doc = _base_report(cfg, args, mu0=summary.mu0)
    doc["spectral_summary"] = summary.as_dict()
    doc["certified_counts"] = [
        {"basis_size": s, "certified": c} for s, c in zip(sizes, counts)
    ]
    doc["oracle"] = oracle
    doc["warnings"] = warnings
    return doc, eigs, None


def cmd_evolve(cfg: dict, args) -> dict:
    kernel, potential, grid, analysis = build_problem(cfg)
    evolve_cfg = cfg.get("evolve", {})
    t_max = float(evolve_cfg.get("t_max", 5.0))
    dt = float(evolve_cfg.get("dt", 0.01))
    scheme = str(evolve_cfg.get("scheme", "rk4"))
    width = float(evolve_cfg.get("initial_width", 1.0))

    driver = EvolutionDriver(kernel, potential, grid)
    x0, _ = locate_minimum(potential, grid)
    state = initial_bump(grid, x0=x0, width=width)
    n_steps = max(3, int(round(t_max / dt)))
    state, records = driver.run(state, dt, n_steps, scheme=scheme)
    rate = growth_rate([r["t"] for r in records], [r["l2norm"] for r in records])

    og = _oracle_grid(grid, analysis)
    eigs = dense_oracle(kernel, potential, og)
    predicted = float(eigs[-1] - driver.mean_a)
    doc = _base_report(cfg, args)
    doc["evolution"] = {
        "t_max": t_max, "dt": dt, "scheme": scheme,
        "steps": n_steps,
        "mean_a": driver.mean_a,
        "growth_rate": rate,
        "oracle_top_eigenvalue": float(eigs[-1]),
        "predicted_rate": predicted,
        "rate_minus_predicted": rate - predicted,
        "final_mass": records[-1]["mass"],
        "final_l2norm": records[-1]["l2norm"],
    }
    doc["warnings"] = []
    return doc, None, records


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlspec",
        description="Spectral analysis of convolution-plus-potential operators")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "check", "count", "evolve"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML or JSON config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--force-offset", action="store_true",
                       help="analyze potentials that do not vanish at infinity")
        p.add_argument("--seed", type=int, default=0,
                       help="seed recorded in the report (pipeline is deterministic)")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    handlers = {"spectrum": cmd_spectrum, "check": cmd_check,
                "count": cmd_count, "evolve": cmd_evolve}
    try:
        doc, eigs, records = handlers[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except HypothesisFailed as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NlspecError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    output_cfg = cfg.get("output", {})
    report_path = out / output_cfg.get("report", "report.json")
    eig_name = output_cfg.get("eigenvalues", "eigenvalues.csv")
    if eigs is not None and "oracle" in doc:
        doc["oracle"]["all_eigenvalues_path"] = eig_name
    write_json(report_path, doc)
    if eigs is not None:
        write_eigenvalue_csv(out / eig_name, eigs)
    if records is not None:
        write_trajectory_csv(out / output_cfg.get("trajectory", "trajectory.csv"), records)
    print(f"report written to {report_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

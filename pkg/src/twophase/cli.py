"""Command-line front end.

    twophase solve-parabolic --config run.json [--out DIR] [--mode implicit]
    twophase solve-elliptic --config run.json
    twophase convergence-study --config study.json
    twophase verify [--seed N] [--fuzz-trials N] ...

Exit codes: 0 success, 1 solver or property failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis
from .config import (ConfigError, build_problem, elliptic_config, load_config,
                     stepper_config)
from .elliptic import solve_elliptic
from .errors import SolverError
from .output import (CONVERGENCE_HEADER, DIAGNOSTICS_HEADER, free_boundary_header,
                     free_boundary_rows, manifest, sign_rows, signs_header,
                     solution_header, solution_rows, write_json, write_rows)
from .parabolic import solve_parabolic

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _outdir(args, cfg):
    out = Path(args.out or cfg.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args, require="problem"):
    cfg = load_config(args.config, require)
    if getattr(args, "mode", None):
        cfg.solver.mode = args.mode
    return cfg


def _finish(out, command, cfg, files, report, started):
    if "manifest" in cfg.output.artifacts:
        write_json(out / "manifest.json", manifest(command, cfg.as_dict(), files, report))
    write_json(out / "timing.json", {"wall_seconds": time.perf_counter() - started})


def cmd_solve_parabolic(args):
    started = time.perf_counter()
    cfg = _load(args)
    problem = build_problem(cfg, elliptic=False)
    scfg = stepper_config(cfg)
    trace = solve_parabolic(problem, scfg)
    out = _outdir(args, cfg)
    grid = problem.grid
    want = set(cfg.output.artifacts)
    tol_sign = cfg.solver.tol_sign
    files = []

    if "solution" in want:
        rows = (r for s in trace.snapshots for r in solution_rows(grid, s.u, s.t))
        write_rows(out / "solution.csv", solution_header(grid.dim), rows)
        files.append("solution.csv")
    if want & {"signs", "free_boundary"}:
        signs = [(s.t, analysis.classify_signs(grid, s.u, tol_sign)) for s in trace.snapshots]
        if "signs" in want:
            rows = (r for t, ss in signs for r in sign_rows(grid, ss, t))
            write_rows(out / "signs.csv", signs_header(grid.dim), rows)
            files.append("signs.csv")
        if "free_boundary" in want:
            rows = (r for t, ss in signs for r in free_boundary_rows(ss, t))
            write_rows(out / "free_boundary.csv", free_boundary_header(grid.dim), rows)
            files.append("free_boundary.csv")
    if "diagnostics" in want:
        rows = ([m + 1, t, a, b, k] for m, (t, a, b, k) in enumerate(zip(
            trace.times, trace.ut_sup, trace.residual_sup, trace.inner_iterations)))
        write_rows(out / "diagnostics.csv", DIAGNOSTICS_HEADER, rows)
        files.append("diagnostics.csv")

    report = {
        "mode": trace.mode,
        "steps": problem.time.M,
        "dt": problem.time.dt,
        "dx": grid.dx,
        "snapshots": len(trace.snapshots),
        "max_residual": float(np.max(trace.residual_sup)),
        "final_ut_sup": float(trace.ut_sup[-1]),
    }
    _finish(out, "solve-parabolic", cfg, files, report, started)
    print(f"solve-parabolic: {problem.time.M} {trace.mode} steps, "
          f"{len(trace.snapshots)} snapshots -> {out}")
    return EXIT_OK


def cmd_solve_elliptic(args):
    started = time.perf_counter()
    cfg = _load(args)
    problem = build_problem(cfg, elliptic=True)
    u, rep = solve_elliptic(problem, elliptic_config(cfg))
    out = _outdir(args, cfg)
    grid = problem.grid
    want = set(cfg.output.artifacts)
    files = []
    if "solution" in want:
        write_rows(out / "solution.csv", solution_header(grid.dim, timed=False),
                   solution_rows(grid, u))
        files.append("solution.csv")
    signs = analysis.classify_signs(grid, u, cfg.solver.tol_sign)
    if "signs" in want:
        write_rows(out / "signs.csv", signs_header(grid.dim, timed=False),
                   sign_rows(grid, signs))
        files.append("signs.csv")
    if "free_boundary" in want:
        write_rows(out / "free_boundary.csv", free_boundary_header(grid.dim, timed=False),
                   free_boundary_rows(signs))
        files.append("free_boundary.csv")
    report = rep.as_dict()
    _finish(out, "solve-elliptic", cfg, files, report, started)
    if not rep.converged:
        print(f"solve-elliptic: no convergence after {rep.iterations} sweeps "
              f"(update {rep.final_update_norm:.3g}, residual "
              f"{rep.final_residual_norm:.3g})", file=sys.stderr)
        return EXIT_FAIL
    print(f"solve-elliptic: converged in {rep.iterations} sweeps -> {out}")
    return EXIT_OK


def cmd_convergence_study(args):
    started = time.perf_counter()
    cfg = _load(args, require="study")
    st = cfg.study
    if st.kind == "heat":
        est = analysis.heat_convergence(st.mode, st.levels, T=st.T, c=st.c, nodes=st.nodes)
    else:
        if st.probe not in analysis.PROBES:
            raise ConfigError(f"study.probe: unknown probe {st.probe!r} "
                              f"(available: {', '.join(analysis.PROBES)})")
        kind = "elliptic" if st.kind == "elliptic_probe" else "parabolic"
        try:
            est = analysis.consistency_order(
                analysis.PROBES[st.probe], kind, st.point, st.levels,
                st.lambda_plus, st.lambda_minus, t0=st.t0, c=st.c)
        except analysis.BranchTieError as exc:
            print(f"convergence-study: {exc}", file=sys.stderr)
            return EXIT_FAIL
        except ValueError as exc:
            raise ConfigError(f"study: {exc}") from None
    out = _outdir(args, cfg)
    dts = est.dt if est.dt is not None else [float("nan")] * len(est.h)
    write_rows(out / "convergence.csv", CONVERGENCE_HEADER,
               ([lvl, h, dt, e] for lvl, h, dt, e in zip(st.levels, est.h, dts, est.errors)))
    _finish(out, "convergence-study", cfg, ["convergence.csv"], est.as_dict(), started)
    slope = "exact (errors at roundoff)" if est.exact else f"{est.slope:.4f}"
    print(f"convergence-study: {st.kind} observed order {slope}")
    return EXIT_OK


def run_verify(seed, fuzz_trials=1000, exactness_trials=500, oracle_trials=50,
               comparison_trials=100, inject_cfl_violation=False, band_nodes=101):
    """Run every property check; returns the report dict."""
    checks = []
    if inject_cfl_violation:
        checks.append(analysis.monotonicity_fuzz("parabolic", fuzz_trials, seed, c=0.6, K=2))
    else:
        checks.append(analysis.monotonicity_fuzz("parabolic", fuzz_trials, seed))
    checks.append(analysis.monotonicity_fuzz("elliptic", fuzz_trials, seed))
    checks.append(analysis.explicit_exactness(exactness_trials, seed))
    checks.append(analysis.oracle_trials(oracle_trials, seed))
    checks.append(analysis.comparison_trials(comparison_trials, seed))
    entries = [c.as_dict() for c in checks]

    # the harness must be able to fail: a CFL-violating run has to be caught
    teeth = analysis.monotonicity_fuzz("parabolic", fuzz_trials, seed, c=0.6, K=2)
    entries.append({"name": "harness_sensitivity", "trials": teeth.trials,
                    "violations_found": len(teeth.violations),
                    "passed": not teeth.passed})

    entries.append(_band_entry(band_nodes))
    return {"seed": seed, "passed": all(e["passed"] for e in entries), "checks": entries}


def _band_entry(nodes):
    from .parabolic import StepperConfig
    from .problem import builtin_cases

    failures = []
    runs = 0
    for case in builtin_cases(nodes=nodes, elliptic=True):
        u, rep = solve_elliptic(case.problem)
        ok = analysis.residual_band_check(case.problem.grid, u, case.problem.lp,
                                          case.problem.lm, 10 * 1e-8)
        runs += 1
        if not (rep.converged and ok.all()):
            failures.append({"case": case.name, "solver": "elliptic"})
    for case in builtin_cases(nodes=nodes):
        prob = case.problem
        cfg = StepperConfig(mode="implicit")
        trace = solve_parabolic(prob, cfg)
        tol = 10 * cfg.tol_residual / prob.time.dt
        for k in range(len(trace.snapshots)):
            runs += 1
            if not analysis.snapshot_band_check(prob, trace, k, tol).all():
                failures.append({"case": case.name, "solver": "implicit", "snapshot": k})
    return {"name": "residual_band", "trials": runs, "violations": len(failures),
            "passed": not failures, "counterexamples": failures[:5]}


def cmd_verify(args):
    started = time.perf_counter()
    report = run_verify(args.seed, args.fuzz_trials, args.exactness_trials,
                        args.oracle_trials, args.comparison_trials,
                        args.inject_cfl_violation)
    out = Path(args.out or "verify-out")
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "verify.json", report)
    write_json(out / "timing.json", {"wall_seconds": time.perf_counter() - started})
    for e in report["checks"]:
        print(f"{'PASS' if e['passed'] else 'FAIL'}  {e['name']}  ({e['trials']} trials)")
    if not report["passed"]:
        print(f"verify: property violations; reproduce with --seed {args.seed}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="twophase",
        description="Finite-difference solvers for the two-phase obstacle-like problem.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True, metavar="PATH",
                           help="JSON run configuration")
        p.add_argument("--out", metavar="DIR", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, default=0, help="master random seed")
        p.add_argument("--mode", choices=("explicit", "implicit"),
                       help="override solver.mode")

    p = sub.add_parser("solve-parabolic", help="time-march the parabolic problem")
    common(p)
    p.set_defaults(func=cmd_solve_parabolic)
    p = sub.add_parser("solve-elliptic", help="solve the two-phase membrane problem")
    common(p)
    p.set_defaults(func=cmd_solve_elliptic)
    p = sub.add_parser("convergence-study", help="observed order over a grid sequence")
    common(p)
    p.set_defaults(func=cmd_convergence_study)
    p = sub.add_parser("verify", help="run the randomized property checks")
    common(p, config=False)
    p.add_argument("--fuzz-trials", type=int, default=1000)
    p.add_argument("--exactness-trials", type=int, default=500)
    p.add_argument("--oracle-trials", type=int, default=50)
    p.add_argument("--comparison-trials", type=int, default=100)
    p.add_argument("--inject-cfl-violation", action="store_true",
                   help="run the monotonicity check at c = 0.6, K = 2 (must fail)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

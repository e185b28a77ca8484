"""Verification instruments.

Consistency-order estimation against closed-form probes, an exhaustive
branch-enumeration oracle for tiny membrane problems, sign-set extraction,
the residual band check, and randomized drivers for the monotonicity,
exactness and comparison properties.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grid import GridSpec, TimeGrid, build_grid
from .operators import (SchemeParams, elliptic_component, elliptic_residual,
                        lh_apply, parabolic_component, parabolic_residual)
from .problem import ProblemSpec, make_problem


# ---------------------------------------------------------------------------
# smooth probes

@dataclass(frozen=True)
class SmoothProbe:
    """phi(t, *x) with closed-form phi_t and Laplacian."""
    name: str
    dim: int
    phi: Callable
    phi_t: Callable
    laplacian: Callable


_PI = math.pi

PROBES = {
    "quadratic": SmoothProbe(
        "quadratic", 1,
        lambda t, x: x ** 2,
        lambda t, x: 0.0 * x,
        lambda t, x: 2.0 + 0.0 * x),
    "sin": SmoothProbe(
        "sin", 1,
        lambda t, x: np.sin(_PI * x),
        lambda t, x: 0.0 * x,
        lambda t, x: -_PI ** 2 * np.sin(_PI * x)),
    "sin2d": SmoothProbe(
        "sin2d", 2,
        lambda t, x, y: np.sin(_PI * x) * np.sin(_PI * y),
        lambda t, x, y: 0.0 * x,
        lambda t, x, y: -2 * _PI ** 2 * np.sin(_PI * x) * np.sin(_PI * y)),
    "linear_tx": SmoothProbe(
        "linear_tx", 1,
        lambda t, x: t + x,
        lambda t, x: 1.0 + 0.0 * x,
        lambda t, x: 0.0 * x),
    "exp_sin": SmoothProbe(
        "exp_sin", 1,
        lambda t, x: np.exp(-t) * np.sin(_PI * x),
        lambda t, x: -np.exp(-t) * np.sin(_PI * x),
        lambda t, x: -_PI ** 2 * np.exp(-t) * np.sin(_PI * x)),
    "exp_sin2d": SmoothProbe(
        "exp_sin2d", 2,
        lambda t, x, y: np.exp(t) * np.sin(_PI * x) * np.sin(_PI * y),
        lambda t, x, y: np.exp(t) * np.sin(_PI * x) * np.sin(_PI * y),
        lambda t, x, y: -2 * _PI ** 2 * np.exp(t) * np.sin(_PI * x) * np.sin(_PI * y)),
}


class BranchTieError(ValueError):
    """The probe point sits too close to a switch between min/max branches."""


@dataclass
class OrderEstimate:
    h: np.ndarray
    errors: np.ndarray
    slope: Optional[float]
    fit_residual: Optional[float]
    dt: Optional[np.ndarray] = None
    exact: bool = False

    def as_dict(self) -> dict:
        return {
            "h": self.h.tolist(),
            "dt": None if self.dt is None else self.dt.tolist(),
            "errors": self.errors.tolist(),
            "slope": self.slope,
            "fit_residual": self.fit_residual,
            "exact": self.exact,
        }


def fit_order(steps, errors) -> tuple[float, float]:
    """Least-squares slope of log(error) against log(step) and the rms misfit."""
    steps = np.asarray(steps, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if steps.size < 3:
        raise ValueError(f"an order fit needs at least 3 levels, got {steps.size}")
    if np.any(errors <= 0):
        raise ValueError("errors must be positive to fit an order")
    X, Y = np.log(steps), np.log(errors)
    coef = np.polyfit(X, Y, 1)
    misfit = float(np.sqrt(np.mean((np.polyval(coef, X) - Y) ** 2)))
    return float(coef[0]), misfit


def _branch_gap(a, b, r):
    """Distance from the nearest branch switch of min(a, max(b, r))."""
    top = max(b, r)
    if a < top:
        return top - a
    return min(a - top, abs(b - r))


def _node_at(grid: GridSpec, point) -> int:
    point = np.atleast_1d(np.asarray(point, dtype=float))
    d = np.max(np.abs(grid.coords - point[None, :]), axis=1)
    i = int(np.argmin(d))
    if d[i] > 1e-9 * grid.dx:
        raise ValueError(f"point {point.tolist()} is not a node of {grid}")
    if grid._row[i] < 0:
        raise ValueError(f"point {point.tolist()} is on the boundary")
    return i


def consistency_order(probe: SmoothProbe, kind: str, point, levels,
                      lam_plus: float = 1.0, lam_minus: float = 1.0,
                      t0: float = 0.5, c: float = 0.4,
                      bounds=(0.0, 1.0)) -> OrderEstimate:
    """Truncation error of the scheme applied to ``probe`` at ``point``.

    ``levels`` are nodes-per-dimension counts on ``bounds``.  For
    ``kind='parabolic'`` the time step is tied to the mesh by dt = c dx^2
    and the slope is fitted against dt; for ``'elliptic'`` against dx.
    """
    if kind not in ("elliptic", "parabolic"):
        raise ValueError(f"kind must be 'elliptic' or 'parabolic', got {kind!r}")
    levels = list(levels)
    if len(levels) < 3:
        raise ValueError(f"need at least 3 grid levels, got {len(levels)}")
    point = np.atleast_1d(np.asarray(point, dtype=float))
    if point.size != probe.dim:
        raise ValueError(f"probe {probe.name} is {probe.dim}D, point has {point.size} coords")
    x0 = tuple(point)

    # exact operator arguments at the probe point
    A = float(-probe.laplacian(t0, *x0))
    if kind == "parabolic":
        A += float(probe.phi_t(t0, *x0))
    r = float(probe.phi(t0, *x0))
    exact_args = (A + lam_plus, A - lam_minus, r)
    exact = float(min(exact_args[0], max(exact_args[1], exact_args[2])))

    hs, dts, errs, truncs = [], [], [], []
    for n in levels:
        grid = build_grid(probe.dim, [bounds] * probe.dim, n)
        i = _node_at(grid, point)
        if kind == "elliptic":
            phi = probe.phi(t0, *grid.coords.T) + 0.0 * grid.coords[:, 0]
            A_h = lh_apply(grid, phi)[i]
            r_h = phi[i]
            val = elliptic_residual(grid, phi, lam_plus, lam_minus)[i]
            dts.append(np.nan)
        else:
            dt = c * grid.dx ** 2
            old = probe.phi(t0, *grid.coords.T) + 0.0 * grid.coords[:, 0]
            new = probe.phi(t0 + dt, *grid.coords.T) + 0.0 * grid.coords[:, 0]
            params = SchemeParams(grid.dx, grid.K, dt)
            A_h = (new[i] - old[i]) / dt + lh_apply(grid, old)[i]
            r_h = new[i]
            val = parabolic_residual(grid, params, old, new, lam_plus, lam_minus)[i] / dt
            dts.append(dt)
        hs.append(grid.dx)
        errs.append(abs(val - exact))
        truncs.append(max(abs(A_h - A), abs(r_h - r)))

    hs, errs = np.array(hs), np.array(errs)
    dts = None if kind == "elliptic" else np.array(dts)
    floor = 1e-9 * (1.0 + max(abs(v) for v in exact_args))
    if np.all(errs <= floor):
        # nothing to fit; a tie cannot spoil an exact value
        return OrderEstimate(hs, errs, None, None, dts, exact=True)
    gap = _branch_gap(*exact_args)
    if gap < 10 * truncs[0]:
        raise BranchTieError(
            f"branch gap {gap:.3g} at {x0} is below 10x the truncation error "
            f"{truncs[0]:.3g} on the coarsest level; pick a point where one "
            "branch is strictly active")
    steps = hs if kind == "elliptic" else dts
    slope, misfit = fit_order(steps, errs)
    return OrderEstimate(hs, errs, slope, misfit, dts)


# ---------------------------------------------------------------------------
# brute-force oracle

MAX_ORACLE_NODES = 6
POS, NEG, ZERO = 0, 1, 2


class OracleError(RuntimeError):
    pass


def brute_force_elliptic(problem: ProblemSpec, tol: float = 1e-12) -> np.ndarray:
    """Solve the membrane scheme by enumerating every branch assignment.

    Each interior node is put in one of three branches (L u = -lam+,
    L u = lam-, or u = 0); the linear system is solved and the assignment is
    kept only if its solution satisfies that branch's inequalities.  Exactly
    one assignment must survive.
    """
    grid = problem.grid
    ii = grid.interior
    n = ii.size
    if n > MAX_ORACLE_NODES:
        raise ValueError(f"oracle is limited to {MAX_ORACLE_NODES} interior nodes, "
                         f"problem has {n}")
    h2 = grid.dx ** 2
    K = grid.K
    ub = grid.zeros()
    ub[grid.boundary] = problem.boundary_values(0.0)
    lp, lm = problem.lp[ii], problem.lm[ii]

    # L u restricted to interior unknowns: (Lmat @ u_int - known) / h2
    row = grid._row
    Lmat = np.zeros((n, n))
    known = np.zeros(n)
    for r in range(n):
        Lmat[r, r] = K
        for j in grid.neighbor_table[r]:
            if row[j] >= 0:
                Lmat[r, row[j]] -= 1.0
            else:
                known[r] += ub[j]
    Lmat /= h2
    known /= h2

    scale = 1.0 + np.max(np.abs(ub)) + np.max(np.abs(np.r_[lp, lm])) * h2
    eps = tol * scale
    found = []
    for assign in itertools.product((POS, NEG, ZERO), repeat=n):
        assign = np.array(assign)
        A = np.where((assign == ZERO)[:, None], np.eye(n), Lmat)
        rhs = np.select([assign == POS, assign == NEG], [-lp + known, lm + known], 0.0)
        u = np.linalg.solve(A, rhs)
        Lu = Lmat @ u - known
        ok_pos = u >= -eps
        ok_neg = u <= eps
        ok_zero = (Lu + lp >= -eps / h2) & (Lu - lm <= eps / h2)
        ok = np.select([assign == POS, assign == NEG], [ok_pos, ok_neg], ok_zero)
        if np.all(ok):
            found.append((assign, u))
    if not found:
        raise OracleError("no consistent branch assignment (oracle bug)")
    if len(found) > 1:
        raise OracleError(f"{len(found)} consistent branch assignments; "
                          "the discrete solution should be unique")
    out = ub.copy()
    out[ii] = found[0][1]
    return out


# ---------------------------------------------------------------------------
# sign sets and residual band

@dataclass
class SignSets:
    classes: np.ndarray = field(repr=False)   # +1, -1, 0 per node
    points: np.ndarray                        # (k, dim) free-boundary points

    @property
    def positive(self) -> np.ndarray:
        return self.classes > 0

    @property
    def negative(self) -> np.ndarray:
        return self.classes < 0


def default_tol_sign(u) -> float:
    return 1e-6 * (float(np.max(np.abs(u))) + 1.0)


def classify_signs(grid: GridSpec, u, tol_sign: Optional[float] = None) -> SignSets:
    """Split nodes into {u > tol}, {u < -tol} and the rest; locate the interface.

    Along every grid edge whose end classes differ: a +/- edge gets the
    linearly interpolated zero, an edge touching a zero-class node gets that
    node's position.  In 2D the result is the set of edge crossings.
    """
    u = np.asarray(u, dtype=float)
    if tol_sign is None:
        tol_sign = default_tol_sign(u)
    cls = np.zeros(grid.size, dtype=np.int8)
    cls[u > tol_sign] = 1
    cls[u < -tol_sign] = -1

    n = grid.nodes_per_dim
    ids = np.arange(grid.size).reshape(grid.shape)
    pts = []
    for axis in range(grid.dim):
        a = np.take(ids, range(n - 1), axis=axis).ravel()
        b = np.take(ids, range(1, n), axis=axis).ravel()
        diff = cls[a] != cls[b]
        a, b = a[diff], b[diff]
        strict = cls[a] * cls[b] < 0
        if np.any(strict):
            sa, sb = a[strict], b[strict]
            w = u[sa] / (u[sa] - u[sb])
            pts.append(grid.coords[sa] + w[:, None] * (grid.coords[sb] - grid.coords[sa]))
        touch = ~strict
        if np.any(touch):
            za = np.where(cls[a[touch]] == 0, a[touch], b[touch])
            pts.append(grid.coords[za])
    if pts:
        points = np.unique(np.vstack(pts), axis=0)
    else:
        points = np.empty((0, grid.dim))
    return SignSets(cls, points)


def residual_band_check(grid: GridSpec, u, lp, lm, tol: float,
                        dudt=None) -> np.ndarray:
    """Per-node verdict of -lam- <= -(L_h u + u_t) <= lam+, within ``tol``.

    ``u`` is the function the stencil acts on; pass ``dudt`` for a parabolic
    level.  Boundary nodes always pass.
    """
    a = lh_apply(grid, u)
    if dudt is not None:
        a = a + np.asarray(dudt, dtype=float)
    lp = np.broadcast_to(lp, (grid.size,))
    lm = np.broadcast_to(lm, (grid.size,))
    ok = (a + lp >= -tol) & (a - lm <= tol)
    ok[grid.boundary] = True
    return ok


def snapshot_band_check(problem: ProblemSpec, trace, index: int, tol: float) -> np.ndarray:
    """Band check for one emitted snapshot of a parabolic run.

    The implicit scheme applies the stencil at the new level, the explicit one
    at the previous level (recovered as u - dt * dudt).  The t = 0 snapshot
    carries no scheme equation and passes trivially.
    """
    grid = problem.grid
    snap = trace.snapshots[index]
    if index == 0 and snap.t == 0.0:
        return np.ones(grid.size, dtype=bool)
    operand = snap.u if trace.mode == "implicit" else snap.u - trace.dt * snap.dudt
    return residual_band_check(grid, operand, problem.lp, problem.lm, tol, snap.dudt)


# ---------------------------------------------------------------------------
# randomized property drivers

@dataclass
class PropertyReport:
    name: str
    trials: int
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"name": self.name, "trials": self.trials,
                "violations": len(self.violations), "passed": self.passed,
                "counterexamples": self.violations[:5]}


def trial_rngs(seed: int, trials: int):
    """Independent generators, one per trial, derived from the master seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def _ordered_pair(rng, size):
    v = rng.uniform(-10, 10, size)
    noise = rng.uniform(0, 5, size)
    # sparse noise as often as dense: single-entry bumps are what expose bad signs
    if rng.random() < 0.5:
        noise *= rng.random(size) < 0.5
    return v + noise, v


def monotonicity_fuzz(kind: str, trials: int, seed: int, c: Optional[float] = None,
                      K: Optional[int] = None, rtol: float = 1e-12) -> PropertyReport:
    """Randomized check that the scheme residual is monotone.

    parabolic: u >= v at level m with equal new-level values must give
    S(u) <= S(v).  elliptic: raising u_i or any difference u_i - u_j must not
    lower F^i.  ``c`` and ``K`` pin the diffusion number and stencil size;
    by default c is drawn in (0, 1/K] with the edge value 1/K hit often.
    """
    if kind not in ("parabolic", "elliptic"):
        raise ValueError(f"unknown scheme kind {kind!r}")
    report = PropertyReport(f"monotonicity[{kind}]", trials)
    for k, rng in enumerate(trial_rngs(seed, trials)):
        KK = K if K is not None else int(rng.choice([2, 4]))
        lp, lm = rng.uniform(0.01, 5, 2)
        if kind == "parabolic":
            if c is not None:
                cc = c
            else:
                cc = 1.0 / KK if rng.random() < 0.25 else rng.uniform(0, 1.0 / KK)
            dt = rng.uniform(1e-3, 0.5)
            u_old, v_old = _ordered_pair(rng, KK + 1)
            new = rng.uniform(-10, 10)
            su = parabolic_component(new, u_old[0], u_old[1:], cc, dt, lp, lm)
            sv = parabolic_component(new, v_old[0], v_old[1:], cc, dt, lp, lm)
            tol = rtol * (1 + np.max(np.abs(np.r_[u_old, v_old, new])))
            if su > sv + tol:
                report.violations.append({
                    "trial": k, "seed": seed, "K": KK, "c": cc, "dt": dt,
                    "lambda_plus": lp, "lambda_minus": lm, "u_new": new,
                    "u_old": u_old.tolist(), "v_old": v_old.tolist(),
                    "S_u": float(su), "S_v": float(sv)})
        else:
            dx = rng.uniform(0.01, 1.0)
            args = rng.uniform(-10, 10, KK + 1)
            bumped = args.copy()
            which = int(rng.integers(KK + 1))
            bumped[which] += rng.uniform(0, 5)
            f0 = elliptic_component(args[0], args[1:], dx, lp, lm)
            f1 = elliptic_component(bumped[0], bumped[1:], dx, lp, lm)
            tol = rtol * (1 + np.max(np.abs(bumped)) * KK / dx ** 2)
            if f1 < f0 - tol:
                report.violations.append({
                    "trial": k, "seed": seed, "K": KK, "dx": dx,
                    "lambda_plus": lp, "lambda_minus": lm, "argument": which,
                    "before": args.tolist(), "after": bumped.tolist(),
                    "F_before": float(f0), "F_after": float(f1)})
    return report


def _smooth_field(rng, dim, lo, hi):
    """A random smooth function of the coordinates with values in [lo, hi]."""
    w = rng.uniform(0.5, 4, dim)
    ph = rng.uniform(0, 2 * np.pi)
    mid, half = (hi + lo) / 2, (hi - lo) / 2

    def f(*x):
        return mid + half * np.sin(ph + sum(wi * xi for wi, xi in zip(w, x)))
    return f


def _random_boundary(rng, dim):
    a0, a1, a2 = rng.uniform(-8, 8), rng.uniform(0, 6), rng.uniform(-4, 4)
    w = rng.uniform(0.5, 6, dim)
    ph = rng.uniform(0, 2 * np.pi)

    def h(t, *x):
        return a0 + a1 * np.sin(ph + sum(wi * xi for wi, xi in zip(w, x))) + a2 * t
    return h


def random_grid(rng, dim=None, max_nodes=(21, 7)) -> GridSpec:
    dim = dim or int(rng.choice([1, 2]))
    n = int(rng.integers(3, max_nodes[dim - 1] + 1))
    L = rng.uniform(0.5, 2.0)
    return build_grid(dim, [(0.0, L)] * dim, n)


def random_problem(rng, dim=None, cfl: bool = True, steps: int = 10,
                   grid: Optional[GridSpec] = None) -> ProblemSpec:
    """A small random parabolic problem; dt obeys the explicit CFL bound if ``cfl``."""
    grid = grid or random_grid(rng, dim)
    if cfl:
        c = rng.uniform(0.05, 1.0) / grid.K
    else:
        c = rng.uniform(1.0, 50.0)
    time = TimeGrid(c * grid.dx ** 2 * steps, steps)
    lp = _smooth_field(rng, grid.dim, 0.1, rng.uniform(0.2, 5))
    lm = _smooth_field(rng, grid.dim, 0.1, rng.uniform(0.2, 5))
    h = _random_boundary(rng, grid.dim)
    g = rng.uniform(-10, 10, grid.size)
    g[grid.boundary] = h(0.0, *grid.coords[grid.boundary].T)
    return make_problem(grid, time, lp, lm, g, h)


def ordered_problem_pair(rng, dim=None, cfl: bool = True, steps: int = 10):
    """Two problems sharing grid, time and coefficients with g1 >= g2, h1 >= h2."""
    p2 = random_problem(rng, dim, cfl, steps)
    grid = p2.grid
    d0, d1 = rng.uniform(0, 2, 2)
    w = rng.uniform(0.5, 4)

    def bump(t, *x):
        return d0 + d1 * (1 + np.sin(w * (t + sum(x))))
    def h1(t, *x):
        return p2.boundary(t, *x) + bump(t, *x)

    g1 = p2.g + rng.uniform(0, 3, grid.size) * (rng.random(grid.size) < 0.7)
    g1[grid.boundary] = h1(0.0, *grid.coords[grid.boundary].T)
    p1 = make_problem(grid, p2.time, p2.lp, p2.lm, g1, h1)
    return p1, p2


def random_tiny_elliptic(rng) -> ProblemSpec:
    """A membrane problem with at most six interior nodes."""
    if rng.random() < 0.7:
        grid = build_grid(1, [(0.0, rng.uniform(0.2, 3))], int(rng.integers(3, 9)))
    else:
        grid = build_grid(2, [(0.0, rng.uniform(0.2, 3))] * 2, int(rng.integers(3, 5)))
    lp = rng.uniform(0.1, 5, grid.size)
    lm = rng.uniform(0.1, 5, grid.size)
    hb = rng.uniform(-10, 10, grid.size)
    lookup = {tuple(c): v for c, v in zip(grid.coords.tolist(), hb)}

    def h(t, *x):
        return np.array([lookup[tuple(p)] for p in np.stack(x, axis=-1).tolist()])
    return make_problem(grid, None, lp, lm, None, h)


def explicit_exactness(trials: int, seed: int, rtol: float = 1e-12) -> PropertyReport:
    """After an explicit step the scheme residual vanishes to roundoff."""
    from .parabolic import explicit_step

    report = PropertyReport("explicit_exactness", trials)
    for k, rng in enumerate(trial_rngs(seed, trials)):
        prob = random_problem(rng, steps=1)
        grid = prob.grid
        params = SchemeParams.for_grid(grid, prob.time.dt)
        u = prob.initial_values()
        bnew = prob.boundary_values(prob.time.dt)
        u_new = explicit_step(grid, params, u, prob.lp, prob.lm, bnew)
        res = parabolic_residual(grid, params, u, u_new, prob.lp, prob.lm)
        bound = rtol * (1 + max(np.max(np.abs(u)), np.max(np.abs(u_new))))
        worst = float(np.max(np.abs(res)))
        if worst > bound:
            report.violations.append({"trial": k, "seed": seed, "dim": grid.dim,
                                      "residual": worst, "bound": bound})
    return report


def comparison_trials(trials: int, seed: int, modes=("explicit", "implicit"),
                      tol: float = 1e-8, steps: int = 10) -> PropertyReport:
    """Ordered data must give ordered solutions at every time level."""
    from .parabolic import StepperConfig, solve_parabolic

    report = PropertyReport("comparison", trials * len(modes))
    for k, rng in enumerate(trial_rngs(seed, trials)):
        for mode in modes:
            # implicit trials also cover dt far beyond the explicit bound
            cfl = mode == "explicit" or bool(rng.random() < 0.5)
            p1, p2 = ordered_problem_pair(rng, cfl=cfl, steps=steps)
            cfg = StepperConfig(mode=mode, snapshot_stride=1)
            t1 = solve_parabolic(p1, cfg)
            t2 = solve_parabolic(p2, cfg)
            gaps = [float(np.min(s1.u - s2.u)) for s1, s2 in zip(t1.snapshots, t2.snapshots)]
            if min(gaps) < -tol:
                report.violations.append({"trial": k, "seed": seed, "mode": mode,
                                          "worst_gap": min(gaps)})
    return report


def oracle_trials(trials: int, seed: int, tol: float = 1e-10) -> PropertyReport:
    """PGS and branch enumeration must agree on random tiny membrane problems."""
    from .elliptic import EllipticConfig, solve_elliptic

    # PGS error is about update / (1 - rate); 1e-13 keeps it well under tol
    config = EllipticConfig(tol_update=1e-13)
    report = PropertyReport("oracle_equivalence", trials)
    for k, rng in enumerate(trial_rngs(seed, trials)):
        prob = random_tiny_elliptic(rng)
        try:
            ref = brute_force_elliptic(prob)
        except OracleError as exc:
            report.violations.append({"trial": k, "seed": seed, "error": str(exc)})
            continue
        u, rep = solve_elliptic(prob, config)
        diff = float(np.max(np.abs(u - ref)))
        if diff > tol or not rep.converged:
            report.violations.append({"trial": k, "seed": seed, "sup_diff": diff,
                                      "converged": rep.converged})
    return report


def heat_problem(nodes: int, T: float, steps: int) -> ProblemSpec:
    """lam+- = 0, g = sin(pi x), h = 0 on [0, 1]: plain heat equation."""
    grid = build_grid(1, [(0.0, 1.0)], nodes)
    return make_problem(grid, TimeGrid(T, steps), 0.0, 0.0,
                        lambda x: np.sin(_PI * x), 0.0, allow_degenerate=True)


def heat_exact(x, t):
    return np.exp(-_PI ** 2 * t) * np.sin(_PI * x)


def heat_convergence(mode: str, levels, T: float = 0.1, c: float = 0.4,
                     nodes: int = 101) -> OrderEstimate:
    """Sup-norm error at T against the exact heat solution over a refinement.

    explicit: ``levels`` are node counts, dt = c dx^2 (rounded so T/dt is an
    integer), slope fitted in dx.  implicit: ``levels`` are step counts on a
    fixed grid of ``nodes`` nodes, slope fitted in dt.
    """
    from .parabolic import StepperConfig, solve_parabolic

    levels = list(levels)
    if len(levels) < 3:
        raise ValueError(f"need at least 3 levels, got {len(levels)}")
    hs, dts, errs = [], [], []
    for level in levels:
        if mode == "explicit":
            dx = 1.0 / (level - 1)
            prob = heat_problem(level, T, max(1, round(T / (c * dx * dx))))
        elif mode == "implicit":
            prob = heat_problem(nodes, T, level)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        trace = solve_parabolic(prob, StepperConfig(mode=mode))
        x = prob.grid.coords[:, 0]
        errs.append(float(np.max(np.abs(trace.final - heat_exact(x, T)))))
        hs.append(prob.grid.dx)
        dts.append(prob.time.dt)
    hs, dts, errs = np.array(hs), np.array(dts), np.array(errs)
    slope, misfit = fit_order(hs if mode == "explicit" else dts, errs)
    return OrderEstimate(hs, errs, slope, misfit, dts)

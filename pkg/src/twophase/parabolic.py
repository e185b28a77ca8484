"""Time marching for the parabolic two-phase obstacle-like problem.

Two steppers:

* explicit -- the two-step projected update
      half = min(a + dt lam-, 0),   u^{m+1} = max(a - dt lam+, half),
  with a = u^m - c L u^m, valid under dt/dx^2 <= 1/K;
* implicit -- the backward-Euler version, solved each step by projected
  Gauss-Seidel; monotone for every dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .elliptic import run_pgs
from .errors import CFLViolation, ConvergenceError, SolverError
from .grid import GridSpec, TimeGrid
from .operators import (SchemeParams, cfl_check, implicit_residual,
                        parabolic_residual, stencil_sum, sup_norm)
from .problem import ProblemSpec

MODES = ("explicit", "implicit")


@dataclass
class StepperConfig:
    mode: str = "explicit"
    cfl_safety: float = 0.9
    snapshot_stride: Optional[int] = None
    tol_update: float = 1e-10
    tol_residual: float = 1e-8
    max_inner: Optional[int] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0 < self.cfl_safety <= 1:
            raise ValueError(f"cfl_safety must lie in (0, 1], got {self.cfl_safety}")
        if self.snapshot_stride is not None and self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")

    def stride(self, M: int) -> int:
        if self.snapshot_stride is not None:
            return self.snapshot_stride
        return max(1, M // 100)

    def inner_cap(self, grid: GridSpec) -> int:
        if self.max_inner is not None:
            return int(self.max_inner)
        return 100 * grid.size * grid.nodes_per_dim


@dataclass
class InnerReport:
    iterations: int
    final_update_norm: float
    final_residual_norm: float
    converged: bool


@dataclass
class Snapshot:
    t: float
    u: np.ndarray = field(repr=False)
    # backward difference (u^m - u^{m-1}) / dt; zeros at t = 0
    dudt: np.ndarray = field(repr=False)


@dataclass
class SolutionTrace:
    mode: str
    dt: float
    snapshots: list
    times: np.ndarray
    ut_sup: np.ndarray
    residual_sup: np.ndarray
    inner_iterations: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.snapshots[-1].u


def auto_time_grid(grid: GridSpec, T: float, cfl_safety: float = 0.9) -> TimeGrid:
    """Fewest steps with dt <= cfl_safety * dx^2 / K."""
    dt_max = cfl_safety * grid.dx ** 2 / grid.K
    return TimeGrid(T, max(1, math.ceil(T / dt_max * (1 - 1e-12))))


def _check_finite(u, what):
    if not np.all(np.isfinite(u)):
        raise SolverError(f"non-finite values in {what}")


def explicit_step(grid: GridSpec, params: SchemeParams, u_m, lp, lm,
                  boundary_new) -> np.ndarray:
    verdict = cfl_check(params)
    if not verdict:
        raise CFLViolation(verdict)
    u_m = np.asarray(u_m, dtype=float)
    lp = np.broadcast_to(lp, (grid.size,))
    lm = np.broadcast_to(lm, (grid.size,))
    ii = grid.interior
    dt = params.dt
    a = u_m[ii] - params.c * stencil_sum(grid, u_m)
    half = np.minimum(a + dt * lm[ii], 0.0)
    u_new = np.empty_like(u_m)
    u_new[ii] = np.maximum(a - dt * lp[ii], half)
    u_new[grid.boundary] = boundary_new
    _check_finite(u_new, "explicit step")
    return u_new


def implicit_step(grid: GridSpec, params: SchemeParams, u_m, lp, lm, boundary_new,
                  inner: Optional[StepperConfig] = None):
    """One backward-Euler step; raises ConvergenceError if PGS stalls."""
    inner = inner or StepperConfig(mode="implicit")
    u_m = np.asarray(u_m, dtype=float)
    lp = np.broadcast_to(np.asarray(lp, dtype=float), (grid.size,))
    lm = np.broadcast_to(np.asarray(lm, dtype=float), (grid.size,))
    c, dt, K = params.c, params.dt, grid.K
    D = 1.0 + c * K
    u = u_m.copy()
    u[grid.boundary] = boundary_new

    def residual(v):
        return sup_norm(implicit_residual(grid, params, u_m, v, lp, lm))

    iters, upd, res, ok = run_pgs(u, grid, u_m, c, D, dt * lp / D, dt * lm / D,
                                  residual, inner.tol_update, inner.tol_residual,
                                  inner.inner_cap(grid))
    report = InnerReport(iters, float(upd), float(res), ok)
    if not ok:
        raise ConvergenceError(
            f"implicit inner solve did not converge in {iters} sweeps "
            f"(update {upd:.3g}, residual {res:.3g})", report)
    return u, report


def solve_parabolic(problem: ProblemSpec, config: Optional[StepperConfig] = None,
                    ) -> SolutionTrace:
    config = config or StepperConfig()
    if problem.time is None:
        raise ValueError("solve_parabolic needs a problem with a time grid")
    grid, time = problem.grid, problem.time
    params = SchemeParams.for_grid(grid, time.dt)
    if config.mode == "explicit":
        verdict = cfl_check(params)
        if not verdict:
            raise CFLViolation(verdict)
    lp, lm = problem.lp, problem.lm
    M = time.M
    stride = config.stride(M)

    u = problem.initial_values()
    zero = grid.zeros()
    snapshots = [Snapshot(0.0, u.copy(), zero)]
    times = np.empty(M)
    ut_sup = np.empty(M)
    res_sup = np.empty(M)
    inner_its = np.zeros(M, dtype=np.int64)

    for m in range(M):
        t_new = time.t(m + 1)
        bnew = problem.boundary_values(t_new)
        if config.mode == "explicit":
            u_new = explicit_step(grid, params, u, lp, lm, bnew)
            r = parabolic_residual(grid, params, u, u_new, lp, lm)
        else:
            u_new, rep = implicit_step(grid, params, u, lp, lm, bnew, config)
            inner_its[m] = rep.iterations
            r = implicit_residual(grid, params, u, u_new, lp, lm)
        dudt = (u_new - u) / time.dt
        times[m] = t_new
        ut_sup[m] = sup_norm(dudt[grid.interior])
        res_sup[m] = sup_norm(r)
        u = u_new
        if (m + 1) % stride == 0 or m + 1 == M:
            snapshots.append(Snapshot(t_new, u.copy(), dudt))

    return SolutionTrace(config.mode, time.dt, snapshots, times, ut_sup, res_sup,
                         inner_its)


def stability_bound(problem: ProblemSpec, t: float, boundary_sup: float) -> float:
    """max(|g|, |h|) + t * max(|lam+|, |lam-|): a bound for |u^m| up to time t."""
    return (max(float(np.max(np.abs(problem.g))), boundary_sup)
            + t * max(problem.lambda_plus.sup, problem.lambda_minus.sup))

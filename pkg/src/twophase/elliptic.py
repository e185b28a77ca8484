"""Projected Gauss-Seidel for the discrete two-phase membrane problem."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import SolverError
from .grid import GridSpec
from .operators import elliptic_residual, sup_norm
from .problem import ProblemSpec


@dataclass
class EllipticConfig:
    tol_update: float = 1e-10
    tol_residual: float = 1e-8
    max_iterations: Optional[int] = None

    def iteration_cap(self, grid: GridSpec) -> int:
        if self.max_iterations is not None:
            return int(self.max_iterations)
        # Gauss-Seidel needs O(n^2) sweeps per decade on a line of n nodes
        return 100 * grid.size * grid.nodes_per_dim


@dataclass
class EllipticSolveReport:
    iterations: int
    final_update_norm: float
    final_residual_norm: float
    converged: bool

    def as_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "final_update_norm": self.final_update_norm,
            "final_residual_norm": self.final_residual_norm,
            "converged": self.converged,
        }


def pgs_update(S, lp, lm, dx, K):
    """Value of u_i that zeroes F^i with the neighbor sum S frozen."""
    h2 = dx * dx
    return max((S - h2 * lp) / K, min((S + h2 * lm) / K, 0.0))


def run_pgs(u: np.ndarray, grid: GridSpec, base, w, D, p, q,
            residual: Callable[[np.ndarray], float], tol_update: float,
            tol_residual: float, max_sweeps: int):
    """Drive the compiled sweeps until update and residual are both small.

    Returns (sweeps, update norm, residual norm, converged).  Modifies ``u``.
    """
    done = 0
    upd = np.inf
    res = np.inf
    while done < max_sweeps:
        k, upd, status = _kernels.pgs_sweeps(u, grid.interior, grid.neighbor_table,
                                             base, w, D, p, q, tol_update,
                                             max_sweeps - done)
        done += k
        if status == _kernels.NONFINITE:
            raise SolverError(f"non-finite value produced in sweep {done}")
        if upd < tol_update:
            res = residual(u)
            if res < tol_residual:
                return done, upd, res, True
    res = residual(u)
    return done, upd, res, False


def initial_guess(problem: ProblemSpec) -> np.ndarray:
    grid = problem.grid
    u = grid.zeros()
    u[grid.boundary] = problem.boundary_values(0.0)
    if grid.dim == 1:
        x = grid.coords[:, 0]
        u[grid.interior] = np.interp(x[grid.interior], x[[0, -1]], u[[0, -1]])
    return u


def pgs_sweep(grid: GridSpec, u: np.ndarray, lp, lm) -> float:
    """One in-place lexicographic sweep; returns the sup-norm update."""
    h2 = grid.dx ** 2
    K = grid.K
    base = np.zeros(grid.size)
    p = np.broadcast_to(np.asarray(lp, dtype=float) * h2 / K, (grid.size,)).copy()
    q = np.broadcast_to(np.asarray(lm, dtype=float) * h2 / K, (grid.size,)).copy()
    _, upd, status = _kernels.pgs_sweeps(u, grid.interior, grid.neighbor_table,
                                         base, 1.0, float(K), p, q, -1.0, 1)
    if status == _kernels.NONFINITE:
        raise SolverError("non-finite value produced in sweep")
    return upd


def solve_elliptic(problem: ProblemSpec, config: Optional[EllipticConfig] = None,
                   u0: Optional[np.ndarray] = None):
    """Solve F^i[u] = 0 on every interior node.

    Non-convergence is reported through ``report.converged``, not raised.
    """
    config = config or EllipticConfig()
    grid = problem.grid
    h2 = grid.dx ** 2
    K = grid.K
    if u0 is None:
        u = initial_guess(problem)
    else:
        u = np.array(u0, dtype=float)
        u[grid.boundary] = problem.boundary_values(0.0)
    lp, lm = problem.lp, problem.lm

    def residual(v):
        return sup_norm(elliptic_residual(grid, v, lp, lm))

    iters, upd, res, ok = run_pgs(
        u, grid, np.zeros(grid.size), 1.0, float(K), lp * h2 / K, lm * h2 / K,
        residual, config.tol_update, config.tol_residual, config.iteration_cap(grid))
    return u, EllipticSolveReport(iters, float(upd), float(res), ok)

"""Discrete operators: the stencil operator, the min-max residuals, the CFL test.

Sign convention: ``lh_apply`` approximates ``-Laplacian``, so the residuals
read ``min(L u + lam+, max(L u - lam-, u))`` exactly as in the continuous
min-max form written with ``-Delta u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import GridSpec


@dataclass(frozen=True)
class SchemeParams:
    dx: float
    K: int
    dt: Optional[float] = None

    @property
    def c(self) -> float:
        """Diffusion number dt / dx**2."""
        if self.dt is None:
            raise ValueError("elliptic SchemeParams have no time step")
        return self.dt / self.dx ** 2

    @classmethod
    def for_grid(cls, grid: GridSpec, dt: Optional[float] = None) -> "SchemeParams":
        return cls(grid.dx, grid.K, dt)


@dataclass(frozen=True)
class CFLVerdict:
    passed: bool
    ratio: float
    bound: float

    def __bool__(self) -> bool:
        return self.passed

    def message(self) -> str:
        rel = "<=" if self.passed else ">"
        return f"dt/dx^2 = {self.ratio:.6g} {rel} 1/K = {self.bound:.6g}"


def cfl_check(params: SchemeParams) -> CFLVerdict:
    ratio = params.c
    bound = 1.0 / params.K
    # no tolerance: c = 1/K is admissible, anything above is not
    return CFLVerdict(bool(ratio <= bound), ratio, bound)


def minmax(a, r, lp, lm):
    """min(a + lp, max(a - lm, r)), elementwise."""
    return np.minimum(a + lp, np.maximum(a - lm, r))


def stencil_sum(grid: GridSpec, u: np.ndarray) -> np.ndarray:
    """Sum over neighbors of (u_i - u_j) for every interior node (unscaled)."""
    ui = u[grid.interior]
    return (ui[:, None] - u[grid.neighbor_table]).sum(axis=1)


def lh_apply(grid: GridSpec, u) -> np.ndarray:
    """L_h u on interior nodes, 0 on the boundary.  Approximates -Laplacian."""
    u = np.asarray(u, dtype=float)
    out = np.zeros(grid.size)
    out[grid.interior] = stencil_sum(grid, u) / grid.dx ** 2
    return out


def elliptic_component(ui, diffs, dx, lp, lm):
    """F^i as a function of u_i and the differences u_i - u_{i_j} (last axis)."""
    a = np.sum(diffs, axis=-1) / dx ** 2
    return minmax(a, ui, lp, lm)


def elliptic_residual(grid: GridSpec, u, lp, lm) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    lp = np.broadcast_to(lp, (grid.size,))
    lm = np.broadcast_to(lm, (grid.size,))
    ii = grid.interior
    out = np.zeros(grid.size)
    out[ii] = minmax(lh_apply(grid, u)[ii], u[ii], lp[ii], lm[ii])
    return out


def parabolic_component(u_new, u_old, nbrs_old, c, dt, lp, lm):
    """S at one node from the new center value and level-m stencil values."""
    lu = np.sum(np.asarray(u_old)[..., None] - nbrs_old, axis=-1)
    s = u_new - u_old + c * lu
    return minmax(s, dt * u_new, dt * lp, dt * lm)


def parabolic_residual(grid: GridSpec, params: SchemeParams, u_old, u_new,
                       lp, lm) -> np.ndarray:
    """Residual of the explicit scheme at level m+1 (zero on the boundary)."""
    u_old = np.asarray(u_old, dtype=float)
    u_new = np.asarray(u_new, dtype=float)
    lp = np.broadcast_to(lp, (grid.size,))
    lm = np.broadcast_to(lm, (grid.size,))
    ii = grid.interior
    dt = params.dt
    s = u_new[ii] - u_old[ii] + params.c * stencil_sum(grid, u_old)
    out = np.zeros(grid.size)
    out[ii] = minmax(s, dt * u_new[ii], dt * lp[ii], dt * lm[ii])
    return out


def implicit_residual(grid: GridSpec, params: SchemeParams, u_old, u_new,
                      lp, lm) -> np.ndarray:
    """Backward-Euler variant: the stencil acts on level m+1 instead of m."""
    u_old = np.asarray(u_old, dtype=float)
    u_new = np.asarray(u_new, dtype=float)
    lp = np.broadcast_to(lp, (grid.size,))
    lm = np.broadcast_to(lm, (grid.size,))
    ii = grid.interior
    dt = params.dt
    s = u_new[ii] - u_old[ii] + params.c * stencil_sum(grid, u_new)
    out = np.zeros(grid.size)
    out[ii] = minmax(s, dt * u_new[ii], dt * lp[ii], dt * lm[ii])
    return out


def level_m_coefficients(c: float, K: int) -> tuple[float, float]:
    """Coefficients of u_j^m and of each neighbor u_{j_q}^m in S-tilde.

    S-tilde = u_j^{m+1} - (1 - cK) u_j^m - c sum_q u_{j_q}^m; both are <= 0
    exactly when cK <= 1.
    """
    return -(1.0 - c * K), -c


def sup_norm(r) -> float:
    r = np.asarray(r)
    return float(np.max(np.abs(r))) if r.size else 0.0

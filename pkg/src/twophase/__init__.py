"""Monotone finite-difference solvers for the two-phase parabolic
obstacle-like problem and the two-phase membrane problem."""

__version__ = "0.1.0"

from .grid import GridSpec, TimeGrid, build_grid, neighbors
from .problem import ProblemSpec, builtin_case, builtin_cases, make_problem
from .operators import (SchemeParams, cfl_check, elliptic_residual, implicit_residual,
                        lh_apply, parabolic_residual)
from .elliptic import EllipticConfig, pgs_update, solve_elliptic
from .parabolic import (SolutionTrace, StepperConfig, explicit_step, implicit_step,
                        solve_parabolic)

__all__ = [
    "GridSpec", "TimeGrid", "build_grid", "neighbors",
    "ProblemSpec", "builtin_case", "builtin_cases", "make_problem",
    "SchemeParams", "cfl_check", "elliptic_residual", "implicit_residual",
    "lh_apply", "parabolic_residual",
    "EllipticConfig", "pgs_update", "solve_elliptic",
    "SolutionTrace", "StepperConfig", "explicit_step", "implicit_step", "solve_parabolic",
]

"""Problem data: coefficient fields, initial and boundary data, built-in cases."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grid import GridSpec, TimeGrid, build_grid


class CompatibilityWarning(UserWarning):
    """Initial datum disagrees with the boundary datum at t = 0."""


def _as_callable(f) -> Callable:
    if callable(f):
        return f
    value = float(f)
    return lambda *coords: value


def _sample(grid: GridSpec, f) -> tuple[Optional[Callable], np.ndarray]:
    # node arrays pass through as-is (no evaluator)
    if isinstance(f, np.ndarray) and f.ndim == 1 and f.size > 1:
        if f.shape != (grid.size,):
            raise ValueError(f"sampled field has shape {f.shape}, expected ({grid.size},)")
        return None, f.astype(float).copy()
    f = _as_callable(f)
    return f, grid.sample(f)


@dataclass(frozen=True, eq=False)
class CoefficientField:
    evaluator: Optional[Callable]
    values: np.ndarray = field(repr=False)

    @classmethod
    def sample(cls, grid: GridSpec, f) -> "CoefficientField":
        return cls(*_sample(grid, f))

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """A two-phase problem on a structured grid.

    ``time`` is None for the elliptic (membrane) problem, in which case the
    boundary datum is evaluated at t = 0 only.  ``boundary`` is called as
    ``h(t, *coords)`` and ``initial`` as ``g(*coords)``.
    """
    grid: GridSpec
    time: Optional[TimeGrid]
    lambda_plus: CoefficientField
    lambda_minus: CoefficientField
    initial: Optional[Callable]
    boundary: Callable
    g: Optional[np.ndarray] = field(default=None, repr=False)
    name: str = ""

    @property
    def is_elliptic(self) -> bool:
        return self.time is None

    @property
    def lp(self) -> np.ndarray:
        return self.lambda_plus.values

    @property
    def lm(self) -> np.ndarray:
        return self.lambda_minus.values

    def boundary_values(self, t: float) -> np.ndarray:
        """h(t, .) on the boundary nodes, in ``grid.boundary`` order."""
        pts = self.grid.coords[self.grid.boundary]
        vals = self.boundary(t, *pts.T)
        vals = np.broadcast_to(np.asarray(vals, dtype=float), (pts.shape[0],)).copy()
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"boundary datum is not finite at t={t}")
        return vals

    def initial_values(self) -> np.ndarray:
        """g on every node with the boundary overwritten by h(0, .)."""
        u = self.g.copy()
        u[self.grid.boundary] = self.boundary_values(0.0)
        return u


def make_problem(grid: GridSpec, time: Optional[TimeGrid], lambda_plus, lambda_minus,
                 g, h, *, allow_degenerate: bool = False, name: str = "",
                 compat_tol: float = 1e-8) -> ProblemSpec:
    """Sample coefficients and data onto ``grid``.

    ``lambda_plus``/``lambda_minus``/``g`` may be constants, callables of
    the coordinates, or arrays of node values; ``h`` may be a constant or a
    callable ``h(t, *coords)``.
    Zero coefficients are accepted only with ``allow_degenerate=True`` (the
    heat-equation reduction used in tests); negative ones never are.
    """
    lp = CoefficientField.sample(grid, lambda_plus)
    lm = CoefficientField.sample(grid, lambda_minus)
    for label, fld in (("lambda_plus", lp), ("lambda_minus", lm)):
        if not np.all(np.isfinite(fld.values)):
            raise ValueError(f"{label} is not finite on the grid")
        if np.any(fld.values < 0):
            raise ValueError(f"{label} must be positive; min sampled value is "
                             f"{fld.values.min():g}")
        if not allow_degenerate and np.any(fld.values == 0):
            raise ValueError(f"{label} must be strictly positive (pass "
                             "allow_degenerate=True for the reduction mode)")

    if callable(h):
        hfun = h
    else:
        hval = float(h)
        hfun = lambda t, *coords: hval  # noqa: E731

    gfun = gvals = None
    if g is not None:
        gfun, gvals = _sample(grid, g)
        if not np.all(np.isfinite(gvals)):
            raise ValueError("initial datum g is not finite on the grid")
    elif time is not None:
        raise ValueError("a time-dependent problem needs an initial datum g")

    prob = ProblemSpec(grid, time, lp, lm, gfun, hfun, gvals, name)
    hb = prob.boundary_values(0.0)
    if gvals is not None:
        gap = np.max(np.abs(gvals[grid.boundary] - hb))
        scale = 1.0 + max(np.max(np.abs(gvals)), np.max(np.abs(hb)))
        if gap > compat_tol * scale:
            warnings.warn(f"g and h(0, .) differ by up to {gap:.3g} on the boundary",
                          CompatibilityWarning, stacklevel=2)
    return prob


@dataclass(frozen=True, eq=False)
class BuiltinCase:
    name: str
    problem: ProblemSpec


# (lambda_plus, lambda_minus, slope of g); g = slope * (x - 1/2)
_FIGURES = {
    "fig1": (3.0, 1.0, 16.0),
    "fig2": (0.7, 0.2, 8.0),
    "fig3": (0.6, 0.6, 8.0),
}


def builtin_case(name: str, nodes: int = 201, steps: int = 250, T: float = 1.0,
                 elliptic: bool = False) -> BuiltinCase:
    """One of the three 1D cases on [0, 1] with constant boundary data g(0), g(1)."""
    try:
        lp, lm, slope = _FIGURES[name]
    except KeyError:
        raise KeyError(f"unknown case {name!r}; choose from {sorted(_FIGURES)}") from None
    half = slope / 2

    def g(x):
        return slope * x - half

    def h(t, x):
        return np.where(x < 0.5, -half, half)

    grid = build_grid(1, [(0.0, 1.0)], nodes)
    time = None if elliptic else TimeGrid(T, steps)
    return BuiltinCase(name, make_problem(grid, time, lp, lm, g, h, name=name))


def builtin_cases(**kwargs) -> list[BuiltinCase]:
    return [builtin_case(name, **kwargs) for name in _FIGURES]

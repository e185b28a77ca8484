"""Uniform structured grids in 1D and 2D.

Nodes are numbered lexicographically by coordinates, so in 2D node
``ix * n + iy`` sits at ``(x[ix], y[iy])`` and a grid function reshapes to
``(n, n)`` in C order.  Grid functions themselves are plain float arrays of
length ``grid.size``; boundary entries hold Dirichlet data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class GridSpec:
    dim: int
    bounds: tuple[tuple[float, float], ...]
    nodes_per_dim: int
    dx: float
    coords: np.ndarray = field(repr=False)
    interior: np.ndarray = field(repr=False)
    boundary: np.ndarray = field(repr=False)
    neighbor_table: np.ndarray = field(repr=False)
    _row: np.ndarray = field(repr=False)

    @property
    def K(self) -> int:
        return 2 * self.dim

    @property
    def size(self) -> int:
        return self.nodes_per_dim ** self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.nodes_per_dim,) * self.dim

    @property
    def is_interior(self) -> np.ndarray:
        mask = np.zeros(self.size, dtype=bool)
        mask[self.interior] = True
        return mask

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(a, b, self.nodes_per_dim) for a, b in self.bounds]

    def zeros(self) -> np.ndarray:
        return np.zeros(self.size)

    def sample(self, f, *args) -> np.ndarray:
        """Evaluate ``f(*args, *coords)`` at every node.

        Scalars broadcast, so constant callables are fine.
        """
        values = f(*args, *self.coords.T)
        return np.broadcast_to(np.asarray(values, dtype=float), (self.size,)).copy()

    def __repr__(self) -> str:
        return (f"GridSpec(dim={self.dim}, bounds={self.bounds}, "
                f"nodes_per_dim={self.nodes_per_dim}, dx={self.dx:g})")


def build_grid(dim: int, bounds: Sequence, nodes_per_dim: int) -> GridSpec:
    if dim not in (1, 2):
        raise ValueError(f"dim must be 1 or 2, got {dim}")
    if nodes_per_dim < 3:
        raise ValueError(f"nodes_per_dim must be >= 3 (got {nodes_per_dim}); "
                         "a smaller grid has no interior node")
    bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
    if len(bounds) == 1 and dim == 2:
        bounds = np.vstack([bounds, bounds])
    if len(bounds) != dim:
        raise ValueError(f"expected {dim} intervals, got {len(bounds)}")
    lengths = bounds[:, 1] - bounds[:, 0]
    if np.any(~np.isfinite(bounds)) or np.any(lengths <= 0):
        raise ValueError(f"bounds must be finite nondegenerate intervals: {bounds.tolist()}")
    if not np.allclose(lengths, lengths[0], rtol=1e-12, atol=0):
        raise ValueError("spacing must be identical in every dimension; "
                         f"interval lengths differ: {lengths.tolist()}")
    n = nodes_per_dim
    dx = float(lengths[0] / (n - 1))

    axes = [np.linspace(a, b, n) for a, b in bounds]
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=1)

    idx = np.indices((n,) * dim).reshape(dim, -1).T
    on_edge = np.any((idx == 0) | (idx == n - 1), axis=1)
    interior = np.flatnonzero(~on_edge)
    boundary = np.flatnonzero(on_edge)

    # axis order, then (minus, plus)
    strides = [n ** (dim - 1 - a) for a in range(dim)]
    offsets = []
    for s in strides:
        offsets += [-s, s]
    neighbor_table = interior[:, None] + np.asarray(offsets)[None, :]

    row = np.full(n ** dim, -1, dtype=np.int64)
    row[interior] = np.arange(interior.size)

    return GridSpec(
        dim=dim,
        bounds=tuple((float(a), float(b)) for a, b in bounds),
        nodes_per_dim=n,
        dx=dx,
        coords=coords,
        interior=interior.astype(np.int64),
        boundary=boundary.astype(np.int64),
        neighbor_table=neighbor_table.astype(np.int64),
        _row=row,
    )


def neighbors(grid: GridSpec, node: int) -> list[int]:
    if not 0 <= node < grid.size:
        raise IndexError(f"node {node} outside grid of {grid.size} nodes")
    r = grid._row[node]
    if r < 0:
        raise ValueError(f"node {node} is a boundary node; boundary values are "
                         "Dirichlet data and have no stencil")
    return [int(j) for j in grid.neighbor_table[r]]


@dataclass(frozen=True)
class TimeGrid:
    T: float
    M: int

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError(f"horizon T must be positive, got {self.T}")
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"number of steps must be an integer >= 1, got {self.M}")

    @property
    def dt(self) -> float:
        return self.T / self.M

    def times(self) -> np.ndarray:
        return np.arange(self.M + 1) * self.dt

    def t(self, m: int) -> float:
        return self.T if m == self.M else m * self.dt


def check_grid_function(grid: GridSpec, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.size,):
        raise ValueError(f"grid function has shape {u.shape}, expected ({grid.size},)")
    if not np.all(np.isfinite(u)):
        raise ValueError("grid function contains non-finite values")
    return u

"""CSV and manifest writers for the command line.

Floats are written with ``repr`` so every value round-trips exactly and
repeated runs produce identical bytes.  Wall-clock time goes to a separate
``timing.json`` so that the manifest stays deterministic.
"""

from __future__ import annotations

import csv
import json
import platform
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


def _coord_names(dim):
    return ["x", "y"][:dim]


def solution_header(dim, timed=True):
    return (["t"] if timed else []) + _coord_names(dim) + ["u"]


def signs_header(dim, timed=True):
    return (["t"] if timed else []) + _coord_names(dim) + ["class"]


def free_boundary_header(dim, timed=True):
    return (["t"] if timed else []) + _coord_names(dim)


DIAGNOSTICS_HEADER = ["m", "t", "ut_sup", "residual_sup", "inner_iterations"]
CONVERGENCE_HEADER = ["level", "h", "dt", "error"]


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_rows(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def solution_rows(grid, u, t=None):
    pre = [] if t is None else [t]
    for coords, val in zip(grid.coords, u):
        yield pre + list(coords) + [val]


def sign_rows(grid, signs, t=None):
    pre = [] if t is None else [t]
    for coords, cls in zip(grid.coords, signs.classes):
        yield pre + list(coords) + [int(cls)]


def free_boundary_rows(signs, t=None):
    pre = [] if t is None else [t]
    for p in signs.points:
        yield pre + list(p)


def write_json(path: Path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def versions():
    from . import __version__
    return {"twophase": __version__, "numpy": np.__version__,
            "python": platform.python_version()}


def manifest(command, config, files, report=None):
    return {
        "command": command,
        "schema_version": SCHEMA_VERSION,
        "files": files,
        "config": config,
        "versions": versions(),
        "report": report,
    }

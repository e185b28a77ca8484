"""JSON run configurations for the command line.

A config has a ``problem`` (or, for convergence studies, a ``study``) block,
an optional ``solver`` block and an optional ``output`` block.  Unknown keys
are rejected with the dotted path of the offending field.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .expr import ExpressionError, boundary_function, spatial_function
from .grid import TimeGrid, build_grid
from .parabolic import MODES, StepperConfig, auto_time_grid
from .elliptic import EllipticConfig
from .problem import ProblemSpec, builtin_case, make_problem

ARTIFACTS = ("solution", "signs", "free_boundary", "diagnostics", "manifest")
STUDY_KINDS = ("heat", "elliptic_probe", "parabolic_probe")


class ConfigError(ValueError):
    pass


Number = Union[int, float]


@dataclass
class ProblemBlock:
    case: Optional[str] = None
    dim: int = 1
    bounds: Any = (0.0, 1.0)
    nodes: Optional[int] = None
    T: Optional[float] = None
    steps: Any = None
    lambda_plus: Any = None
    lambda_minus: Any = None
    g: Any = None
    h: Any = None
    allow_degenerate: bool = False


@dataclass
class SolverBlock:
    mode: str = "explicit"
    tol_update: float = 1e-10
    tol_residual: float = 1e-8
    max_iterations: Optional[int] = None
    max_inner: Optional[int] = None
    cfl_safety: float = 0.9
    snapshot_stride: Optional[int] = None
    tol_sign: Optional[float] = None


@dataclass
class OutputBlock:
    directory: str = "out"
    artifacts: list = field(default_factory=lambda: list(ARTIFACTS))


@dataclass
class StudyBlock:
    kind: str = "heat"
    levels: list = field(default_factory=list)
    mode: str = "explicit"
    c: float = 0.4
    T: float = 0.1
    nodes: int = 101
    probe: Optional[str] = None
    point: Any = 0.5
    t0: float = 0.5
    lambda_plus: float = 1.0
    lambda_minus: float = 1.0


@dataclass
class RunConfig:
    problem: Optional[ProblemBlock]
    solver: SolverBlock
    output: OutputBlock
    study: Optional[StudyBlock] = None

    def as_dict(self) -> dict:
        d = asdict(self)
        return {k: v for k, v in d.items() if v is not None}


_CASE_OVERRIDES = {"case", "nodes", "steps", "T"}


def _block(cls, data, path):
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object, got {type(data).__name__}")
    known = cls.__dataclass_fields__
    for key in data:
        if key not in known:
            raise ConfigError(f"{path}.{key}: unknown field (allowed: {', '.join(known)})")
    return cls(**data)


def _check_type(value, types, path):
    if isinstance(value, bool) or not isinstance(value, types):
        names = " or ".join(t.__name__ for t in (types if isinstance(types, tuple) else (types,)))
        raise ConfigError(f"{path}: expected {names}, got {value!r}")


def parse_config(data: dict, require: str = "problem") -> RunConfig:
    """Validate a decoded config; ``require`` is 'problem' or 'study'."""
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be an object")
    allowed = {"problem", "solver", "output", "study"}
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{key}: unknown top-level block (allowed: "
                              f"{', '.join(sorted(allowed))})")
    if require not in data:
        raise ConfigError(f"{require}: missing required block")

    problem = study = None
    if "problem" in data:
        problem = _block(ProblemBlock, data["problem"], "problem")
        _validate_problem(problem, elliptic=False)
    if "study" in data:
        study = _block(StudyBlock, data["study"], "study")
        _validate_study(study)
    solver = _block(SolverBlock, data.get("solver", {}), "solver")
    if solver.mode not in MODES:
        raise ConfigError(f"solver.mode: must be one of {MODES}, got {solver.mode!r}")
    for name in ("tol_update", "tol_residual", "cfl_safety"):
        _check_type(getattr(solver, name), (int, float), f"solver.{name}")
    if not 0 < solver.cfl_safety <= 1:
        raise ConfigError(f"solver.cfl_safety: must lie in (0, 1], got {solver.cfl_safety}")
    for name in ("max_iterations", "max_inner", "snapshot_stride"):
        v = getattr(solver, name)
        if v is not None:
            _check_type(v, int, f"solver.{name}")
            if v < 1:
                raise ConfigError(f"solver.{name}: must be >= 1, got {v}")
    output = _block(OutputBlock, data.get("output", {}), "output")
    _check_type(output.directory, str, "output.directory")
    if not isinstance(output.artifacts, list):
        raise ConfigError("output.artifacts: expected a list")
    for a in output.artifacts:
        if a not in ARTIFACTS:
            raise ConfigError(f"output.artifacts: unknown artifact {a!r} "
                              f"(allowed: {', '.join(ARTIFACTS)})")
    return RunConfig(problem, solver, output, study)


def _validate_problem(p: ProblemBlock, elliptic: bool):
    if p.case is not None:
        extra = {k for k, v in asdict(p).items()
                 if k not in _CASE_OVERRIDES and v != getattr(ProblemBlock(), k)}
        if extra:
            raise ConfigError(f"problem.{sorted(extra)[0]}: cannot be combined with "
                              f"problem.case (only nodes, steps, T may override)")
        return
    if p.dim not in (1, 2):
        raise ConfigError(f"problem.dim: must be 1 or 2, got {p.dim!r}")
    if p.nodes is None:
        raise ConfigError("problem.nodes: missing required field")
    for name in ("lambda_plus", "lambda_minus", "h"):
        if getattr(p, name) is None:
            raise ConfigError(f"problem.{name}: missing required field")


def _validate_study(s: StudyBlock):
    if s.kind not in STUDY_KINDS:
        raise ConfigError(f"study.kind: must be one of {STUDY_KINDS}, got {s.kind!r}")
    if not isinstance(s.levels, list) or not all(isinstance(n, int) for n in s.levels):
        raise ConfigError("study.levels: expected a list of integers")
    if len(s.levels) < 3:
        raise ConfigError(f"study.levels: need at least 3 levels, got {len(s.levels)}")
    if s.mode not in MODES:
        raise ConfigError(f"study.mode: must be one of {MODES}, got {s.mode!r}")
    if s.kind != "heat" and s.probe is None:
        raise ConfigError("study.probe: missing required field for a probe study")


def load_config(path, require: str = "problem") -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_config(data, require)


def _compile_spatial(value, dim, path):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        try:
            return spatial_function(value, dim)
        except ExpressionError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(f"{path}: expected a number or an expression string, got {value!r}")


def _compile_boundary(value, dim, path):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        try:
            return boundary_function(value, dim)
        except ExpressionError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(f"{path}: expected a number or an expression string, got {value!r}")


def build_problem(cfg: RunConfig, elliptic: bool) -> ProblemSpec:
    """Turn the problem block into a ProblemSpec (elliptic drops the time grid)."""
    p = cfg.problem
    if p.case is not None:
        kwargs = {k: getattr(p, k) for k in ("nodes", "steps", "T") if getattr(p, k) is not None}
        if kwargs.get("steps") == "auto":
            raise ConfigError("problem.steps: 'auto' is not available with problem.case")
        try:
            return builtin_case(p.case, elliptic=elliptic, **kwargs).problem
        except KeyError as exc:
            raise ConfigError(f"problem.case: {exc.args[0]}") from None

    try:
        grid = build_grid(p.dim, p.bounds, p.nodes)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"problem: {exc}") from None
    lp = _compile_spatial(p.lambda_plus, p.dim, "problem.lambda_plus")
    lm = _compile_spatial(p.lambda_minus, p.dim, "problem.lambda_minus")
    h = _compile_boundary(p.h, p.dim, "problem.h")
    time = None
    g = None
    if not elliptic:
        if p.T is None:
            raise ConfigError("problem.T: missing required field")
        if p.steps is None:
            raise ConfigError("problem.steps: missing required field")
        if p.g is None:
            raise ConfigError("problem.g: missing required field")
        g = _compile_spatial(p.g, p.dim, "problem.g")
        try:
            if p.steps == "auto":
                time = auto_time_grid(grid, float(p.T), cfg.solver.cfl_safety)
            else:
                _check_type(p.steps, int, "problem.steps")
                time = TimeGrid(float(p.T), p.steps)
        except ValueError as exc:
            raise ConfigError(f"problem: {exc}") from None
    elif p.g is not None:
        g = _compile_spatial(p.g, p.dim, "problem.g")
    try:
        return make_problem(grid, time, lp, lm, g, h,
                            allow_degenerate=bool(p.allow_degenerate))
    except ValueError as exc:
        raise ConfigError(f"problem: {exc}") from None


def stepper_config(cfg: RunConfig) -> StepperConfig:
    s = cfg.solver
    return StepperConfig(mode=s.mode, cfl_safety=s.cfl_safety,
                         snapshot_stride=s.snapshot_stride, tol_update=s.tol_update,
                         tol_residual=s.tol_residual, max_inner=s.max_inner)


def elliptic_config(cfg: RunConfig) -> EllipticConfig:
    s = cfg.solver
    return EllipticConfig(tol_update=s.tol_update, tol_residual=s.tol_residual,
                          max_iterations=s.max_iterations)

"""Distributionally robust portfolio layer: minimize the worst-case
mean-variance objective of returns <x, r> over a box or simplex of decisions.

For a decision x the inner problem uses rho = -<x, r> (negated return, so the
worst case penalizes low means) and phi = <x, r> (the return whose variance
is penalized).  The outer minimizer is a deterministic Nelder-Mead with
feasibility projection after every candidate step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divergences import FDivergenceFamily
from .errors import ValidationError
from .measures import EmpiricalMeasure, ProblemData
from .solver import BoundResult, SolverConfig, variance_bound

_MAX_DECISION_DIM = 8
_NM_MAX_ITERS = 500
_NM_DIAMETER_TOL = 1e-6


@dataclass(frozen=True)
class ScenarioMatrix:
    """Per-atom return rows (n x d) under an empirical scenario measure."""

    rows: np.ndarray
    weights: EmpiricalMeasure

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim == 1:
            rows = rows[:, None]
        if rows.ndim != 2 or rows.size == 0:
            raise ValidationError("rows must be a nonempty n x d matrix")
        if not np.all(np.isfinite(rows)):
            raise ValidationError("rows must be finite")
        if rows.shape[0] != len(self.weights):
            raise ValidationError(
                f"{rows.shape[0]} scenario rows for {len(self.weights)} weights"
            )
        if rows.shape[1] > _MAX_DECISION_DIM:
            raise ValidationError(
                f"decision dimension is capped at {_MAX_DECISION_DIM}, got {rows.shape[1]}"
            )
        rows = rows.copy()
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def problem_for(self, x) -> ProblemData:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.size != self.dim:
            raise ValidationError(f"decision has {x.size} entries, expected {self.dim}")
        returns = self.rows @ x
        return ProblemData(rho=-returns, phi=returns)


@dataclass(frozen=True)
class Box:
    """Componentwise bounds lo <= x <= hi (degenerate intervals allowed)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValidationError("lo and hi must be 1-d with the same shape")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValidationError("box bounds must be finite")
        if np.any(lo > hi):
            idx = int(np.argmax(lo > hi))
            raise ValidationError(f"empty box: lo[{idx}] > hi[{idx}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)


@dataclass(frozen=True)
class Simplex:
    """x >= 0, sum(x) = 1."""


def _project_box(x: np.ndarray, box: Box) -> np.ndarray:
    return np.clip(x, box.lo, box.hi)


def _project_simplex(x: np.ndarray) -> np.ndarray:
    # Euclidean projection via the sorted-threshold rule
    u = np.sort(x)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, x.size + 1)
    cond = u + (1.0 - css) / idx > 0.0
    k = int(np.nonzero(cond)[0][-1])
    theta = (1.0 - css[k]) / (k + 1)
    return np.maximum(x + theta, 0.0)


def _projector(constraint, dim: int):
    if isinstance(constraint, Box):
        if constraint.lo.size != dim:
            raise ValidationError(
                f"box has {constraint.lo.size} coordinates, decisions have {dim}"
            )
        return lambda x: _project_box(x, constraint)
    if isinstance(constraint, Simplex):
        return _project_simplex
    raise ValidationError(f"unsupported constraint {constraint!r}")


def _start_point(constraint, dim: int) -> np.ndarray:
    if isinstance(constraint, Box):
        return (constraint.lo + constraint.hi) / 2.0
    return np.full(dim, 1.0 / dim)


def _initial_steps(constraint, dim: int) -> np.ndarray:
    if isinstance(constraint, Box):
        return 0.05 * (constraint.hi - constraint.lo)
    return np.full(dim, 0.05)


def robust_objective(
    x,
    scenarios: ScenarioMatrix,
    family: FDivergenceFamily,
    eta: float,
    config: SolverConfig | None = None,
) -> float:
    """Worst-case E_Q[-<x,r>] + Var_Q[<x,r>] over the divergence ball."""
    return robust_bound(x, scenarios, family, eta, config).value


def robust_bound(
    x,
    scenarios: ScenarioMatrix,
    family: FDivergenceFamily,
    eta: float,
    config: SolverConfig | None = None,
) -> BoundResult:
    """Full inner-solve record at the decision x."""
    data = scenarios.problem_for(x)
    return variance_bound(data, scenarios.weights, family, eta, config=config)


def robust_minimize(
    scenarios: ScenarioMatrix,
    constraint,
    family: FDivergenceFamily,
    eta: float,
    config: SolverConfig | None = None,
) -> tuple[np.ndarray, float]:
    """Nelder-Mead over the constraint set, projecting every candidate.

    Deterministic: fixed start (box center or simplex barycenter), fixed
    initial simplex, stop when the vertex diameter drops below 1e-6 or after
    500 iterations.  Returns (x, worst-case value at x).
    """
    dim = scenarios.dim
    project = _projector(constraint, dim)
    objective = lambda x: robust_objective(x, scenarios, family, eta, config)

    x0 = project(_start_point(constraint, dim))
    steps = _initial_steps(constraint, dim)
    verts = [x0]
    for j in range(dim):
        v = x0.copy()
        v[j] += steps[j]
        verts.append(project(v))
    verts = np.array(verts)
    vals = np.array([objective(v) for v in verts])

    best_x = verts[int(np.argmin(vals))].copy()
    best_f = float(np.min(vals))

    for _ in range(_NM_MAX_ITERS):
        order = np.argsort(vals, kind="stable")
        verts = verts[order]
        vals = vals[order]
        if vals[0] < best_f:
            best_f = float(vals[0])
            best_x = verts[0].copy()
        diameter = max(
            float(np.max(np.abs(verts[i] - verts[0])))
            for i in range(1, len(verts))
        ) if dim >= 1 else 0.0
        if diameter < _NM_DIAMETER_TOL:
            break
        centroid = verts[:-1].mean(axis=0)
        worst = verts[-1]
        reflected = project(centroid + (centroid - worst))
        f_r = objective(reflected)
        if f_r < vals[0]:
            expanded = project(centroid + 2.0 * (centroid - worst))
            f_e = objective(expanded)
            if f_e < f_r:
                verts[-1], vals[-1] = expanded, f_e
            else:
                verts[-1], vals[-1] = reflected, f_r
        elif f_r < vals[-2]:
            verts[-1], vals[-1] = reflected, f_r
        else:
            contracted = project(centroid + 0.5 * (worst - centroid))
            f_c = objective(contracted)
            if f_c < vals[-1]:
                verts[-1], vals[-1] = contracted, f_c
            else:
                # shrink toward the best vertex
                for i in range(1, len(verts)):
                    verts[i] = project(verts[0] + 0.5 * (verts[i] - verts[0]))
                    vals[i] = objective(verts[i])
    i = int(np.argmin(vals))
    if vals[i] < best_f:
        best_f = float(vals[i])
        best_x = verts[i].copy()
    return best_x, best_f

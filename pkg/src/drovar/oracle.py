"""Brute-force primal oracle: grid maximization of E_Q[rho] + Var_Q[phi] over
the divergence ball, for 2- or 3-atom problems only.

The oracle shares no dual machinery: it evaluates the primal objective and
the divergence constraint directly on simplex grids, then refines a shrinking
window around the incumbent (shrink capped at factor 100 per round).  The
window is never shrunk past the bounding box of the near-best feasible grid
points: when the maximizer sits on the curved constraint boundary, the
near-optimal level set is an arc of length ~ sqrt(spacing), so a fixed zoom
around the single best point routinely loses the true argmax.  Because the
objective is concave and the ball convex, that level set is connected and its
bounding box brackets the maximizer.  Ties on a grid break toward the smaller
first coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divergences import FDivergenceFamily, f_eval
from .errors import UnsupportedSizeError, ValidationError
from .measures import EmpiricalMeasure, ProblemData, check_lengths, mean_var_of

_DEFAULT_GRID = {2: 4001, 3: 1201}
_ZOOM = 100.0
_ARGMAX_FLOOR = 1e-12


@dataclass(frozen=True)
class OracleConfig:
    grid_per_dim: int | None = None
    refine_rounds: int = 3

    def __post_init__(self):
        if self.grid_per_dim is not None and self.grid_per_dim < 101:
            raise ValidationError(
                f"grid_per_dim must be at least 101, got {self.grid_per_dim!r}"
            )
        if self.refine_rounds < 0:
            raise ValidationError("refine_rounds must be nonnegative")


def primal_value(q: EmpiricalMeasure, data: ProblemData) -> float:
    """E_Q[rho] + Var_Q[phi] by direct weighted sums."""
    check_lengths(data, q)
    mean_rho, _ = mean_var_of(q, data.rho)
    _, var_phi = mean_var_of(q, data.phi)
    return mean_rho + var_phi


def _divergence_batch(Q: np.ndarray, p: np.ndarray,
                      family: FDivergenceFamily) -> np.ndarray:
    return f_eval(family, Q / p) @ p


def _value_batch(Q: np.ndarray, data: ProblemData) -> np.ndarray:
    mean_rho = Q @ data.rho
    m1 = Q @ data.phi
    m2 = Q @ (data.phi**2)
    return mean_rho + m2 - m1 * m1


def _argmax_measure(q: np.ndarray) -> EmpiricalMeasure:
    # exact-boundary grid points carry zero atoms; nudge them inside so the
    # strictly-positive measure type can hold the argmax
    w = np.maximum(q, _ARGMAX_FLOOR)
    return EmpiricalMeasure(w / math.fsum(w.tolist()))


def primal_sup_grid(
    data: ProblemData,
    p: EmpiricalMeasure,
    family: FDivergenceFamily,
    eta: float,
    config: OracleConfig | None = None,
) -> tuple[float, EmpiricalMeasure]:
    """Grid maximum of the primal objective over { q : D_f(q, p) <= eta }.

    Returns (value, argmax).  Only 2- or 3-atom problems are supported.
    """
    cfg = config or OracleConfig()
    check_lengths(data, p)
    if not (math.isfinite(eta) and 0.0 < eta < family.divergence_cap):
        raise ValidationError(
            f"eta must lie in (0, {family.divergence_cap:g}), got {eta!r}"
        )
    n = len(p)
    if n not in (2, 3):
        raise UnsupportedSizeError(
            f"the grid oracle handles 2 or 3 atoms, got {n}"
        )
    g = cfg.grid_per_dim or _DEFAULT_GRID[n]
    if n == 2:
        return _sup_two(data, p, family, eta, g, cfg.refine_rounds)
    return _sup_three(data, p, family, eta, g, cfg.refine_rounds)


def _value_slack(data: ProblemData, spacing: float) -> float:
    """Value band that one grid spacing can hide: spacing times a sup-norm
    bound on the objective gradient rho + phi^2 - 2 E_q[phi] phi."""
    lip = float(np.max(np.abs(data.rho + data.phi**2))
                + 2.0 * np.max(np.abs(data.phi)) ** 2)
    return 4.0 * spacing * max(lip, 1e-12)


def _sup_two(data, p, family, eta, g, rounds):
    pw = p.weights
    lo, hi = 0.0, 1.0
    best_v = -math.inf
    best_t = None
    for _ in range(rounds + 1):
        ts = np.linspace(lo, hi, g)
        spacing = (hi - lo) / (g - 1)
        Q = np.column_stack([ts, 1.0 - ts])
        feas = _divergence_batch(Q, pw, family) <= eta
        near_lo = near_hi = None
        if feas.any():
            vals = np.where(feas, _value_batch(Q, data), -math.inf)
            i = int(np.argmax(vals))
            if vals[i] > best_v:
                best_v = float(vals[i])
                best_t = float(ts[i])
            near = vals >= vals[i] - _value_slack(data, spacing)
            near_lo = float(ts[np.argmax(near)])
            near_hi = float(ts[len(near) - 1 - np.argmax(near[::-1])])
        center = best_t if best_t is not None else float(pw[0])
        half = (hi - lo) / (2.0 * _ZOOM)
        lo_new, hi_new = center - half, center + half
        if near_lo is not None:
            # never shrink past the near-best level set: the maximizer hides
            # anywhere inside it, two spacings of margin cover the gridding
            lo_new = min(lo_new, near_lo - 2.0 * spacing)
            hi_new = max(hi_new, near_hi + 2.0 * spacing)
        lo, hi = max(0.0, lo_new), min(1.0, hi_new)
    if best_t is None:
        raise ValidationError("no feasible grid point found")
    return best_v, _argmax_measure(np.array([best_t, 1.0 - best_t]))


def _sup_three(data, p, family, eta, g, rounds):
    pw = p.weights
    win = [(0.0, 1.0), (0.0, 1.0)]
    best_v = -math.inf
    best_t = None
    for _ in range(rounds + 1):
        t1 = np.linspace(win[0][0], win[0][1], g)
        t2 = np.linspace(win[1][0], win[1][1], g)
        spacing = max(win[0][1] - win[0][0], win[1][1] - win[1][0]) / (g - 1)
        T1, T2 = np.meshgrid(t1, t2, indexing="ij")
        T1 = T1.ravel()
        T2 = T2.ravel()
        keep = T1 + T2 <= 1.0 + 1e-12
        T1, T2 = T1[keep], T2[keep]
        Q = np.column_stack([T1, T2, np.maximum(1.0 - T1 - T2, 0.0)])
        feas = _divergence_batch(Q, pw, family) <= eta
        near_box = None
        if feas.any():
            vals = np.where(feas, _value_batch(Q, data), -math.inf)
            i = int(np.argmax(vals))
            if vals[i] > best_v:
                best_v = float(vals[i])
                best_t = (float(T1[i]), float(T2[i]))
            near = vals >= vals[i] - _value_slack(data, spacing)
            near_box = (
                (float(T1[near].min()), float(T1[near].max())),
                (float(T2[near].min()), float(T2[near].max())),
            )
        center = best_t if best_t is not None else (float(pw[0]), float(pw[1]))
        new_win = []
        for k in range(2):
            half = (win[k][1] - win[k][0]) / (2.0 * _ZOOM)
            lo, hi = center[k] - half, center[k] + half
            if near_box is not None:
                # see _sup_two: the window keeps the near-best level set
                lo = min(lo, near_box[k][0] - 2.0 * spacing)
                hi = max(hi, near_box[k][1] + 2.0 * spacing)
            new_win.append((max(0.0, lo), min(1.0, hi)))
        win = new_win
    if best_t is None:
        raise ValidationError("no feasible grid point found")
    q = np.array([best_t[0], best_t[1], max(1.0 - best_t[0] - best_t[1], 0.0)])
    return best_v, _argmax_measure(q)

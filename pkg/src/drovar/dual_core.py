"""Dual objectives for worst-case mean/variance bounds, gradients, tilts, diagnostics.

The worst-case value sup { E_Q[rho] + Var_Q[phi] : D_f(Q, P) <= eta } equals
the infimum over lam > 0, beta, nu of the jointly convex objective

    J(lam, beta, nu) = nu^2/4 + beta + eta*lam
                       + lam * E_P[ f*((rho + phi^2 - nu*phi - beta) / lam) ],

where nu/2 plays the role of the worst-case mean of phi.  Replacing the
square penalty by a general convex g turns nu^2/4 into the conjugate g*(nu)
(dual_objective_general); dropping the phi block entirely gives the
worst-case mean bound (dual_objective_mean).

Two family-specific reductions eliminate coordinates in closed form:

  * KL: the optimal beta gives  nu^2/4 + eta*lam + lam*log E_P[exp((rho+phi^2-nu*phi)/lam)].
  * alpha in (0,1): the optimal lam gives, whenever every atom has
    rho_i + phi_i^2 - nu*phi_i - beta < 0,
        nu^2/4 + beta - alpha * ((1-alpha)/C)^((1-alpha)/alpha) * (cap - eta)^(1/alpha),
    with C = E_P[|rho+phi^2-nu*phi-beta|^(-alpha/(1-alpha))] / (alpha*(1-alpha)^(alpha/(1-alpha)))
    and cap = 1/(alpha*(1-alpha)); +inf otherwise.

KL conjugate expectations are taken in log space (max-shifted log-sum-exp) and
re-exponentiated once, so small lam cannot overflow before the final scaling.

The minimizer's tilted weights  w_i = p_i * (f*)'(Psi_i)  are the worst-case
distribution; at an interior optimum they are an exact stationarity
certificate:  sum w_i = 1,  D_f(w, p) = eta,  sum w_i phi_i = nu/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from .divergences import (
    EXP_ARG_CAP,
    KL,
    FDivergenceFamily,
    alpha_family,
    conj_deriv,
    conj_eval,
    f_eval,
)
from .errors import DerivativeUnavailable, ValidationError
from .measures import EmpiricalMeasure, ProblemData, check_lengths

# Stationarity-certificate tolerances used by the test suite.
NORMALIZATION_TOL = 1e-6
DIVERGENCE_TOL = 1e-5
MEAN_CONDITION_TOL = 1e-6

_FY_CHECK_POINTS = 100
_FY_TOL = 1e-9


@dataclass(frozen=True)
class DualPoint:
    """A point (lam, beta, nu) in the dual domain; lam must be positive."""

    lam: float
    beta: float
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise ValidationError(f"lam must be positive and finite, got {self.lam!r}")
        if not (math.isfinite(self.beta) and math.isfinite(self.nu)):
            raise ValidationError("beta and nu must be finite")


@dataclass(frozen=True)
class ConjugatePair:
    """A convex penalty g with its conjugate g* and (g*)'.

    Construction spot-checks the Fenchel-Young inequality
    g(z) + g*(nu) >= z*nu on a fixed 100-point random grid.
    """

    g: Callable[[float], float]
    g_conj: Callable[[float], float]
    g_conj_deriv: Callable[[float], float]

    def __post_init__(self):
        rng = np.random.default_rng(20118)
        zs = rng.uniform(-10.0, 10.0, _FY_CHECK_POINTS)
        vs = rng.uniform(-10.0, 10.0, _FY_CHECK_POINTS)
        for z, v in zip(zs, vs):
            if self.g(z) + self.g_conj(v) < z * v - _FY_TOL:
                raise ValidationError(
                    f"Fenchel-Young violated at z={z:.6g}, nu={v:.6g}: "
                    "g and g_conj are not conjugate"
                )


def _square(z: float) -> float:
    return z * z


def _quarter_square(nu: float) -> float:
    return nu * nu / 4.0


def _half(nu: float) -> float:
    return nu / 2.0


#: The variance penalty g(z) = z^2 with g*(nu) = nu^2/4.
SQUARE_PAIR = ConjugatePair(g=_square, g_conj=_quarter_square, g_conj_deriv=_half)


@dataclass(frozen=True)
class TiltResult:
    """Worst-case weights w_i = p_i * (f*)'(psi_i) and the conjugate arguments."""

    weights: np.ndarray
    psi: np.ndarray


@dataclass(frozen=True)
class Diagnostics:
    """Stationarity certificate values at a dual point.

    normalization      sum of tilted weights (1 at an interior optimum)
    achieved_divergence D_f(tilt, P)          (eta at an interior optimum)
    mean_condition_gap E_tilt[phi] - nu/2     (0 at an interior optimum)
    boundary_flag      True when the solve pinned lam at its floor
    """

    normalization: float
    achieved_divergence: float
    mean_condition_gap: float
    boundary_flag: bool


def check_eta(eta: float, family: FDivergenceFamily) -> None:
    if not (math.isfinite(eta) and 0.0 < eta < family.divergence_cap):
        raise ValidationError(
            f"eta must lie in (0, {family.divergence_cap:g}), got {eta!r}"
        )


def _conj_args(lam, beta, nu, psi, phi) -> np.ndarray:
    return (psi - nu * phi - beta) / lam


def _kl_log_mean(args: np.ndarray, w: np.ndarray) -> float:
    """log E_P[exp(args)], max-shifted."""
    return float(logsumexp(args, b=w))


def _conj_tail(lam: float, args: np.ndarray, p: EmpiricalMeasure,
               family: FDivergenceFamily) -> float:
    """lam * E_P[f*(args)], extended-real."""
    if family.kind == KL:
        e = _kl_log_mean(args, p.weights) - 1.0 + math.log(lam)
        return math.inf if e > EXP_ARG_CAP else math.exp(e)
    vals = conj_eval(family, args)
    if np.isinf(vals).any():
        return math.inf
    return lam * float(np.dot(p.weights, vals))


def dual_objective_general(
    dp: DualPoint,
    psi,
    phi,
    pair: ConjugatePair,
    p: EmpiricalMeasure,
    family: FDivergenceFamily,
    eta: float,
) -> float:
    """g*(nu) + beta + eta*lam + lam*E_P[f*((psi - nu*phi - beta)/lam)], extended-real."""
    check_eta(eta, family)
    psi = np.atleast_1d(np.asarray(psi, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if psi.size != len(p) or phi.size != len(p):
        raise ValidationError("psi, phi, and p must share one atom set")
    args = _conj_args(dp.lam, dp.beta, dp.nu, psi, phi)
    tail = _conj_tail(dp.lam, args, p, family)
    return pair.g_conj(dp.nu) + dp.beta + eta * dp.lam + tail


def dual_objective_variance(
    dp: DualPoint,
    data: ProblemData,
    p: EmpiricalMeasure,
    family: FDivergenceFamily,
    eta: float,
) -> float:
    """The variance-penalty dual objective; the square-pair case of the general one."""
    check_lengths(data, p)
    return dual_objective_general(dp, data.psi, data.phi, SQUARE_PAIR, p, family, eta)


def dual_objective_mean(
    lam: float,
    beta: float,
    values,
    p: EmpiricalMeasure,
    family: FDivergenceFamily,
    eta: float,
) -> float:
    """beta + eta*lam + lam*E_P[f*((values - beta)/lam)] for the worst-case mean."""
    check_eta(eta, family)
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValidationError(f"lam must be positive and finite, got {lam!r}")
    v = np.atleast_1d(np.asarray(values, dtype=float))
    if v.size != len(p):
        raise ValidationError("values and p must share one atom set")
    args = (v - beta) / lam
    return beta + eta * lam + _conj_tail(lam, args, p, family)


def kl_reduced_objective(
    lam: float, nu: float, data: ProblemData, p: EmpiricalMeasure, eta: float
) -> float:
    """KL dual with beta eliminated: nu^2/4 + eta*lam + lam*log E_P[exp((rho+phi^2-nu*phi)/lam)]."""
    if not (math.isfinite(eta) and eta > 0.0):
        raise ValidationError(f"eta must be positive, got {eta!r}")
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValidationError(f"lam must be positive and finite, got {lam!r}")
    check_lengths(data, p)
    u = data.psi - nu * data.phi
    return nu * nu / 4.0 + eta * lam + lam * _kl_log_mean(u / lam, p.weights)


def kl_reduced_gradient(
    lam: float, nu: float, data: ProblemData, p: EmpiricalMeasure, eta: float
) -> tuple[float, float]:
    """(d/dlam, d/dnu) of kl_reduced_objective."""
    u = data.psi - nu * data.phi
    args = u / lam
    L = _kl_log_mean(args, p.weights)
    # softmax weights of args under p
    omega = np.exp(np.log(p.weights) + args - L)
    d_lam = eta + L - float(np.dot(omega, args))
    d_nu = nu / 2.0 - float(np.dot(omega, data.phi))
    return d_lam, d_nu


def kl_optimal_beta(
    lam: float, nu: float, data: ProblemData, p: EmpiricalMeasure
) -> float:
    """The closed-form beta minimizing the KL dual at fixed (lam, nu)."""
    u = data.psi - nu * data.phi
    return lam * (_kl_log_mean(u / lam, p.weights) - 1.0)


def _alpha_gaps(beta: float, nu: float, data: ProblemData) -> np.ndarray:
    """beta - (psi - nu*phi); every entry must be > 0 for the reduced form."""
    return beta + nu * data.phi - data.psi


def _check_alpha01(alpha: float, eta: float) -> float:
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"this reduction needs alpha in (0,1), got {alpha!r}")
    cap = 1.0 / (alpha * (1.0 - alpha))
    if not (math.isfinite(eta) and 0.0 < eta < cap):
        raise ValidationError(f"eta must lie in (0, {cap:g}), got {eta!r}")
    return cap


def alpha_reduced_objective(
    beta: float, nu: float, data: ProblemData, p: EmpiricalMeasure,
    alpha: float, eta: float,
) -> float:
    """alpha in (0,1) dual with lam eliminated; +inf unless every conjugate
    argument is strictly negative (the finite-C branch)."""
    cap = _check_alpha01(alpha, eta)
    check_lengths(data, p)
    gaps = _alpha_gaps(beta, nu, data)
    if np.any(gaps <= 0.0):
        return math.inf
    r = alpha / (1.0 - alpha)
    with np.errstate(over="ignore"):
        K = float(np.dot(p.weights, gaps ** (-r)))
    C = K / (alpha * (1.0 - alpha) ** r)
    # C = +inf degrades gracefully: the correction term vanishes,
    # matching the lam -> 0 limit of the dual.
    return (
        nu * nu / 4.0
        + beta
        - alpha * ((1.0 - alpha) / C) ** ((1.0 - alpha) / alpha) * (cap - eta) ** (1.0 / alpha)
    )


def alpha_inner_lambda(
    beta: float, nu: float, data: ProblemData, p: EmpiricalMeasure,
    alpha: float, eta: float,
) -> float:
    """The lam recovering the full dual point from the alpha-reduced one."""
    cap = _check_alpha01(alpha, eta)
    gaps = _alpha_gaps(beta, nu, data)
    if np.any(gaps <= 0.0):
        raise ValidationError("point is outside the reduced feasible region")
    r = alpha / (1.0 - alpha)
    with np.errstate(over="ignore"):
        K = float(np.dot(p.weights, gaps ** (-r)))
    C = K / (alpha * (1.0 - alpha) ** r)
    return ((1.0 - alpha) * (cap - eta) / C) ** ((1.0 - alpha) / alpha)


def alpha_reduced_gradient(
    beta: float, nu: float, data: ProblemData, p: EmpiricalMeasure,
    alpha: float, eta: float,
) -> tuple[float, float]:
    """(d/dbeta, d/dnu) of alpha_reduced_objective, via the envelope identity.

    At the inner-optimal lam the reduced gradient equals the (beta, nu) block
    of the full dual gradient.
    """
    gaps = _alpha_gaps(beta, nu, data)
    if np.any(gaps <= 0.0):
        raise DerivativeUnavailable(
            "reduced objective is +inf here; use the derivative-free path"
        )
    lam = alpha_inner_lambda(beta, nu, data, p, alpha, eta)
    if lam <= 0.0:
        raise DerivativeUnavailable(
            "inner lam underflowed to zero; use the derivative-free path"
        )
    family = alpha_family(alpha)
    dens = conj_deriv(family, -gaps / lam)
    d_beta = 1.0 - float(np.dot(p.weights, dens))
    d_nu = nu / 2.0 - float(np.dot(p.weights, dens * data.phi))
    return d_beta, d_nu


def _moments(args: np.ndarray, phi: np.ndarray, p: EmpiricalMeasure,
             family: FDivergenceFamily) -> tuple[float, float, float, float]:
    """E[f*], E[(f*)'], E[(f*)'*args], E[(f*)'*phi] under P at the given arguments."""
    if family.kind == KL:
        L = _kl_log_mean(args, p.weights)
        if L - 1.0 > EXP_ARG_CAP:
            raise DerivativeUnavailable("conjugate expectation overflows at this point")
        base = math.exp(L - 1.0)
        omega = np.exp(np.log(p.weights) + args - L)
        return (
            base,
            base,
            base * float(np.dot(omega, args)),
            base * float(np.dot(omega, phi)),
        )
    fv = conj_eval(family, args)
    dv = conj_deriv(family, args)
    if np.isinf(fv).any() or np.isinf(dv).any():
        raise DerivativeUnavailable(
            "conjugate argument outside dom f*; use the derivative-free path"
        )
    w = p.weights
    return (
        float(np.dot(w, fv)),
        float(np.dot(w, dv)),
        float(np.dot(w, dv * args)),
        float(np.dot(w, dv * phi)),
    )


def gradient_variance(
    dp: DualPoint,
    data: ProblemData,
    p: EmpiricalMeasure,
    family: FDivergenceFamily,
    eta: float,
) -> tuple[float, float, float]:
    """(d/dlam, d/dbeta, d/dnu) of dual_objective_variance at a smooth finite point."""
    check_eta(eta, family)
    check_lengths(data, p)
    args = _conj_args(dp.lam, dp.beta, dp.nu, data.psi, data.phi)
    e_f, e_d, e_da, e_dphi = _moments(args, data.phi, p, family)
    return (
        eta + e_f - e_da,
        1.0 - e_d,
        dp.nu / 2.0 - e_dphi,
    )


def tilt(
    dp: DualPoint,
    data: ProblemData,
    p: EmpiricalMeasure,
    family: FDivergenceFamily,
) -> TiltResult:
    """Worst-case weights p_i * (f*)'(Psi_i) at the dual point (unnormalized)."""
    check_lengths(data, p)
    args = _conj_args(dp.lam, dp.beta, dp.nu, data.psi, data.phi)
    dens = conj_deriv(family, args)
    if not np.all(np.isfinite(dens)):
        raise ValidationError(
            "conjugate argument outside dom f*; no tilt exists at this point"
        )
    return TiltResult(weights=p.weights * dens, psi=args)


def optimality_diagnostics(
    dp: DualPoint,
    data: ProblemData,
    p: EmpiricalMeasure,
    family: FDivergenceFamily,
    eta: float,
    boundary: bool = False,
) -> Diagnostics:
    """Evaluate the stationarity certificate at dp (see Diagnostics)."""
    t = tilt(dp, data, p, family)
    normalization = math.fsum(t.weights.tolist())
    dens = t.weights / p.weights
    achieved = math.fsum((p.weights * f_eval(family, dens)).tolist())
    mean_gap = math.fsum((t.weights * data.phi).tolist()) - dp.nu / 2.0
    return Diagnostics(
        normalization=normalization,
        achieved_divergence=achieved,
        mean_condition_gap=mean_gap,
        boundary_flag=bool(boundary),
    )

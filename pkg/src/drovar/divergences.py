"""f-divergence generator families: f, its convex conjugate, and the conjugate derivative.

Generators live on t >= 0, are convex, and vanish at t = 1:

    kl              f(t) = t*log(t)
    alpha (a != 1)  f(t) = (t^a - 1) / (a*(a-1))

Conjugates f*(y) = sup_{t >= 0} { t*y - f(t) }:

    kl              f*(y) = exp(y - 1)
    a > 1           f*(y) = ((a-1)*y)^(a/(a-1)) / a * 1{y>0} + 1/(a*(a-1))
    0 < a < 1       f*(y) = ((1-a)*|y|)^(-a/(1-a)) / a - 1/(a*(1-a))  for y < 0, +inf otherwise

All evaluations are extended-real: plain IEEE doubles with +inf encoding
points outside the effective domain.  At conjugate kinks the reported
derivative is the right derivative (0 at y = 0 for a > 1).  Inputs may be
scalars or arrays; arrays evaluate elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

KL = "kl"
ALPHA = "alpha"

ALPHA_MAX = 8.0
EXP_ARG_CAP = 700.0  # exp overflows a double past ~709.8; stay clear of it


@dataclass(frozen=True)
class FDivergenceFamily:
    """A divergence generator with its domain and conjugate metadata.

    divergence_cap is sup_Q D_f(Q, P), finite only for alpha in (0, 1) where
    it equals 1/(alpha*(1-alpha)); radii at or above the cap are vacuous.
    """

    kind: str
    alpha: float | None = None
    domain_lo: float = 0.0
    domain_hi: float = math.inf
    divergence_cap: float = math.inf

    def __post_init__(self):
        if self.kind not in (KL, ALPHA):
            raise ValidationError(f"unknown divergence kind {self.kind!r}")
        if self.kind == ALPHA:
            a = self.alpha
            if a is None or not (0.0 < a <= ALPHA_MAX) or a == 1.0:
                raise ValidationError(
                    f"alpha must lie in (0,1) or (1,{ALPHA_MAX:g}], got {a!r}"
                )

    @property
    def label(self) -> str:
        if self.kind == KL:
            return KL
        return f"alpha:{self.alpha:g}"


def kl_family() -> FDivergenceFamily:
    return FDivergenceFamily(kind=KL)


def alpha_family(alpha: float) -> FDivergenceFamily:
    alpha = float(alpha)
    if not (0.0 < alpha <= ALPHA_MAX) or alpha == 1.0:
        raise ValidationError(
            f"alpha must lie in (0,1) or (1,{ALPHA_MAX:g}], got {alpha!r}"
        )
    cap = 1.0 / (alpha * (1.0 - alpha)) if alpha < 1.0 else math.inf
    return FDivergenceFamily(kind=ALPHA, alpha=alpha, divergence_cap=cap)


def parse_family(spec: str) -> FDivergenceFamily:
    """Parse 'kl' or 'alpha:<value>' (case-insensitive) into a family."""
    text = str(spec).strip().lower()
    if text == KL:
        return kl_family()
    if text.startswith("alpha:"):
        try:
            value = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise ValidationError(f"bad alpha value in divergence spec {spec!r}") from exc
        return alpha_family(value)
    raise ValidationError(
        f"unrecognized divergence spec {spec!r}; expected 'kl' or 'alpha:<value>'"
    )


def _shaped(raw, value):
    """Return a float for scalar input, the array otherwise."""
    if np.ndim(raw) == 0:
        return float(value[0])
    return value


def f_eval(family: FDivergenceFamily, t):
    """Generator value f(t); +inf outside [0, inf).  f(0) is the lsc limit."""
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.full(arr.shape, math.inf)
    if family.kind == KL:
        pos = arr > 0.0
        out[pos] = arr[pos] * np.log(arr[pos])
        out[arr == 0.0] = 0.0
    else:
        a = family.alpha
        ok = arr >= 0.0
        with np.errstate(over="ignore"):
            out[ok] = (arr[ok] ** a - 1.0) / (a * (a - 1.0))
    return _shaped(t, out)


def conj_eval(family: FDivergenceFamily, y):
    """Convex conjugate f*(y); +inf outside dom f*."""
    arr = np.atleast_1d(np.asarray(y, dtype=float))
    if family.kind == KL:
        e = arr - 1.0
        out = np.full(arr.shape, math.inf)
        ok = e <= EXP_ARG_CAP
        out[ok] = np.exp(e[ok])
        return _shaped(y, out)
    a = family.alpha
    if a > 1.0:
        out = np.full(arr.shape, 1.0 / (a * (a - 1.0)))
        pos = arr > 0.0
        with np.errstate(over="ignore"):
            out[pos] += ((a - 1.0) * arr[pos]) ** (a / (a - 1.0)) / a
        return _shaped(y, out)
    out = np.full(arr.shape, math.inf)
    neg = arr < 0.0
    with np.errstate(over="ignore", divide="ignore"):
        out[neg] = ((1.0 - a) * (-arr[neg])) ** (-a / (1.0 - a)) / a - 1.0 / (
            a * (1.0 - a)
        )
    return _shaped(y, out)


def conj_deriv(family: FDivergenceFamily, y):
    """Derivative of the conjugate, (f*)'(y); right derivative at kinks,
    +inf outside dom f*.  This is the worst-case density dQ/dP at argument y."""
    arr = np.atleast_1d(np.asarray(y, dtype=float))
    if family.kind == KL:
        e = arr - 1.0
        out = np.full(arr.shape, math.inf)
        ok = e <= EXP_ARG_CAP
        out[ok] = np.exp(e[ok])
        return _shaped(y, out)
    a = family.alpha
    if a > 1.0:
        out = np.zeros(arr.shape)
        pos = arr > 0.0
        with np.errstate(over="ignore"):
            out[pos] = ((a - 1.0) * arr[pos]) ** (1.0 / (a - 1.0))
        return _shaped(y, out)
    out = np.full(arr.shape, math.inf)
    neg = arr < 0.0
    with np.errstate(over="ignore", divide="ignore"):
        out[neg] = ((1.0 - a) * (-arr[neg])) ** (-1.0 / (1.0 - a))
    return _shaped(y, out)

"""Worst-case mean and mean-plus-variance bounds over f-divergence balls."""

from .divergences import (
    FDivergenceFamily,
    alpha_family,
    conj_deriv,
    conj_eval,
    f_eval,
    kl_family,
    parse_family,
)
from .dual_core import (
    ConjugatePair,
    Diagnostics,
    DualPoint,
    TiltResult,
    dual_objective_general,
    dual_objective_mean,
    dual_objective_variance,
    gradient_variance,
    kl_reduced_objective,
    optimality_diagnostics,
    tilt,
)
from .errors import (
    DerivativeUnavailable,
    InfeasibleStartError,
    UnsupportedSizeError,
    ValidationError,
)
from .measures import (
    EmpiricalMeasure,
    ProblemData,
    divergence_of,
    mean_var_of,
    normalize,
    uniform_measure,
    variational_gap,
)
from .oracle import OracleConfig, primal_sup_grid, primal_value
from .robust import (
    Box,
    ScenarioMatrix,
    Simplex,
    robust_bound,
    robust_minimize,
    robust_objective,
)
from .solver import (
    BOUNDARY_LAMBDA,
    CONVERGED,
    MAX_ITERS,
    BoundResult,
    MinimizeResult,
    SolverConfig,
    mean_bound,
    minimize_dual,
    variance_bound,
)

__all__ = [
    "FDivergenceFamily",
    "alpha_family",
    "conj_deriv",
    "conj_eval",
    "f_eval",
    "kl_family",
    "parse_family",
    "ConjugatePair",
    "Diagnostics",
    "DualPoint",
    "TiltResult",
    "dual_objective_general",
    "dual_objective_mean",
    "dual_objective_variance",
    "gradient_variance",
    "kl_reduced_objective",
    "optimality_diagnostics",
    "tilt",
    "DerivativeUnavailable",
    "InfeasibleStartError",
    "UnsupportedSizeError",
    "ValidationError",
    "EmpiricalMeasure",
    "ProblemData",
    "divergence_of",
    "mean_var_of",
    "normalize",
    "uniform_measure",
    "variational_gap",
    "OracleConfig",
    "primal_sup_grid",
    "primal_value",
    "Box",
    "ScenarioMatrix",
    "Simplex",
    "robust_bound",
    "robust_minimize",
    "robust_objective",
    "BOUNDARY_LAMBDA",
    "CONVERGED",
    "MAX_ITERS",
    "BoundResult",
    "MinimizeResult",
    "SolverConfig",
    "mean_bound",
    "minimize_dual",
    "variance_bound",
]

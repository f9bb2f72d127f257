"""The brute-force primal oracle: grid sup over the feasible simplex slice."""

import numpy as np
import pytest

from drovar.divergences import alpha_family, kl_family
from drovar.errors import UnsupportedSizeError, ValidationError
from drovar.measures import EmpiricalMeasure, ProblemData, divergence_of, uniform_measure
from drovar.oracle import OracleConfig, primal_sup_grid, primal_value
from drovar.solver import variance_bound

from _instances import random_instance

KL = kl_family()
A2 = alpha_family(2.0)

BERNOULLI = ProblemData(rho=np.zeros(2), phi=np.array([0.0, 1.0]))
HALF = uniform_measure(2)
SKEWED = EmpiricalMeasure(np.array([0.8, 0.2]))


def test_primal_value_is_mean_plus_variance():
    q = EmpiricalMeasure(np.array([0.7, 0.3]))
    data = ProblemData(rho=np.array([1.0, 2.0]), phi=np.array([0.0, 1.0]))
    # mean 1.3, variance 0.21
    assert primal_value(q, data) == pytest.approx(1.51, abs=1e-15)


def test_config_validation():
    with pytest.raises(ValidationError):
        OracleConfig(grid_per_dim=50)
    with pytest.raises(ValidationError):
        OracleConfig(refine_rounds=-1)
    OracleConfig(grid_per_dim=101, refine_rounds=0)


def test_oracle_rejects_unsupported_sizes_and_radii():
    data = ProblemData(rho=np.zeros(4), phi=np.zeros(4))
    with pytest.raises(UnsupportedSizeError):
        primal_sup_grid(data, uniform_measure(4), KL, 0.1)
    with pytest.raises(ValidationError):
        primal_sup_grid(BERNOULLI, HALF, KL, 0.0)
    with pytest.raises(ValidationError):
        primal_sup_grid(BERNOULLI, HALF, alpha_family(0.5), 4.0)


def test_interior_maximum_found_exactly():
    value, argmax = primal_sup_grid(BERNOULLI, HALF, KL, 0.1)
    assert value == pytest.approx(0.25, abs=1e-6)
    np.testing.assert_allclose(argmax.weights, [0.5, 0.5], atol=1e-4)


def test_skewed_kl_instance():
    value, argmax = primal_sup_grid(BERNOULLI, SKEWED, KL, 0.1)
    assert value == pytest.approx(0.2390, abs=2e-3)
    np.testing.assert_allclose(argmax.weights, [0.605, 0.395], atol=5e-3)


def test_skewed_alpha_instance():
    value, argmax = primal_sup_grid(BERNOULLI, SKEWED, A2, 0.08)
    assert value == pytest.approx(0.2304, abs=1e-4)
    np.testing.assert_allclose(argmax.weights, [0.64, 0.36], atol=5e-3)


def test_argmax_is_feasible():
    rng = np.random.default_rng(59)
    for n in (2, 3):
        data, p = random_instance(rng, n)
        for fam in (KL, A2):
            value, argmax = primal_sup_grid(data, p, fam, 0.2)
            assert divergence_of(argmax, p, fam) <= 0.2 + 1e-9
            assert primal_value(argmax, data) == pytest.approx(value, abs=1e-12)


def test_oracle_never_beats_the_dual_bound():
    rng = np.random.default_rng(61)
    for n in (2, 3):
        for fam in (KL, A2):
            data, p = random_instance(rng, n)
            bound = variance_bound(data, p, fam, 0.2).value
            oracle, _ = primal_sup_grid(data, p, fam, 0.2)
            assert oracle <= bound + 1e-8
            assert oracle >= bound - 1e-4


def test_more_refinement_never_loses_value():
    rng = np.random.default_rng(67)
    data, p = random_instance(rng, 2)
    coarse, _ = primal_sup_grid(data, p, KL, 0.3, OracleConfig(refine_rounds=0))
    fine, _ = primal_sup_grid(data, p, KL, 0.3, OracleConfig(refine_rounds=4))
    assert fine >= coarse - 1e-12


def test_tilt_matches_oracle_argmax_on_a_converged_instance():
    res = variance_bound(BERNOULLI, SKEWED, KL, 0.1)
    assert res.status == "Converged"
    _, argmax = primal_sup_grid(BERNOULLI, SKEWED, KL, 0.1)
    np.testing.assert_allclose(res.tilt.weights, argmax.weights, atol=1e-2)
